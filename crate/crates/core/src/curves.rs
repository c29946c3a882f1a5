//! Point counts and torsion for the cubic-twist family `y^2 + lambda*y =
//! x^3`: brute-force counts over prime and degree-two residue fields,
//! trace formulas through the Hecke character and cubic symbols, Jacobi-sum
//! oracles, and a certified torsion order over the CM field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::eisenstein::{
    cubic_symbol, fq2_mul, hecke_character, is_prime_u64, mul_mod, pow_mod, primes_up_to,
    residue_iso, split_prime, CubicValue, EisensteinInt, PrimaryPrime,
};
use crate::{Error, Result};

/// Brute-force point count of the curve over the prime residue field of a
/// split place.
pub fn count_points_split(curve: &PrimaryPrime, place: &PrimaryPrime) -> Result<u64> {
    let p = place.ell();
    let lam = residue_iso(curve.lambda(), place);
    if lam == 0 {
        return Err(Error::BadReduction);
    }
    let mut fiber = vec![0u64; p as usize];
    for y in 0..p {
        let v = (mul_mod(y, y, p) + mul_mod(lam, y, p)) % p;
        fiber[v as usize] += 1;
    }
    let mut total = 1u64;
    for x in 0..p {
        let c = mul_mod(mul_mod(x, x, p), x, p);
        total += fiber[c as usize];
    }
    Ok(total)
}

/// Point count over the prime residue field predicted by the Hecke
/// character: `p + 1 - (value + conj(value))`.
pub fn count_points_split_formula(curve: &PrimaryPrime, place: &PrimaryPrime) -> Result<u64> {
    let h = hecke_character(place.lambda(), curve)?;
    if h.is_zero() {
        return Err(Error::BadReduction);
    }
    let z = h.value;
    let trace = BigInt::from(2) * &z.a - &z.b;
    let count: BigInt = BigInt::from(place.ell()) + 1 - trace;
    Ok(count.try_into().expect("positive point count"))
}

/// Brute-force point count over the degree-two residue field of an inert
/// prime `q == 2 (mod 3)`.
pub fn count_points_inert(curve: &PrimaryPrime, q: u64) -> Result<u64> {
    if !is_prime_u64(q) || q % 3 != 2 {
        return Err(Error::Invalid(format!("{q} is not an inert prime")));
    }
    let lam = (
        curve.lambda().a.mod_floor(&BigInt::from(q)).try_into().unwrap(),
        curve.lambda().b.mod_floor(&BigInt::from(q)).try_into().unwrap(),
    );
    let idx = |e: (u64, u64)| (e.0 * q + e.1) as usize;
    let add = |u: (u64, u64), v: (u64, u64)| ((u.0 + v.0) % q, (u.1 + v.1) % q);
    let mut fiber = vec![0u64; (q * q) as usize];
    for u in 0..q {
        for v in 0..q {
            let y = (u, v);
            let rhs = add(fq2_mul(y, y, q), fq2_mul(lam, y, q));
            fiber[idx(rhs)] += 1;
        }
    }
    let mut total = 1u64;
    for u in 0..q {
        for v in 0..q {
            let x = (u, v);
            let c = fq2_mul(fq2_mul(x, x, q), x, q);
            total += fiber[idx(c)];
        }
    }
    Ok(total)
}

/// Point count over the degree-two residue field predicted by the cubic
/// symbol of the twist: `q^2 + 1 + q*(chi + conj(chi))`.
pub fn count_points_inert_formula(curve: &PrimaryPrime, q: u64) -> Result<u64> {
    if !is_prime_u64(q) || q % 3 != 2 {
        return Err(Error::Invalid(format!("{q} is not an inert prime")));
    }
    let modulus = EisensteinInt::new(-(q as i64), 0);
    let chi = cubic_symbol(curve.lambda(), &modulus)?;
    let tr: i64 = match chi {
        CubicValue::Unit(0) => 2,
        CubicValue::Unit(_) => -1,
        CubicValue::Zero => return Err(Error::BadReduction),
    };
    let count = (q * q + 1) as i64 + q as i64 * tr;
    Ok(count as u64)
}

/// The Jacobi sum of the quadratic and cubic residue characters of a split
/// place, computed exactly in the lattice ring, with its closed form.
pub fn jacobi_sum_split(place: &PrimaryPrime) -> (EisensteinInt, EisensteinInt) {
    let p = place.ell();
    let e2 = (p - 1) / 2;
    let e3 = (p - 1) / 3;
    let r1 = place.rho_image() % p;
    let r2 = mul_mod(r1, r1, p);
    let unit = |t: u64| -> EisensteinInt {
        if t == 1 {
            EisensteinInt::one()
        } else if t == r1 {
            EisensteinInt::rho()
        } else if t == r2 {
            EisensteinInt::rho().mul(&EisensteinInt::rho())
        } else {
            unreachable!("cubic power lands on a cube root of unity")
        }
    };
    let mut sum = EisensteinInt::zero();
    for a in 2..p {
        let phi = pow_mod(a, e2, p);
        let chi = unit(pow_mod(p + 1 - a, e3, p));
        if phi == 1 {
            sum = sum.add(&chi);
        } else {
            sum = sum.sub(&chi);
        }
    }
    let predicted = unit(pow_mod(4, e3, p)).mul(place.lambda()).neg();
    (sum, predicted)
}

/// The analogous Jacobi sum over the degree-two field of an inert prime,
/// which collapses to the prime itself; even-order fields are rejected
/// since they carry no quadratic character.
pub fn jacobi_sum_inert(q: u64) -> Result<(EisensteinInt, EisensteinInt)> {
    if !is_prime_u64(q) || q % 3 != 2 {
        return Err(Error::Invalid(format!("{q} is not an inert prime")));
    }
    if q == 2 {
        return Err(Error::Invalid(
            "the field of order four has no quadratic character".into(),
        ));
    }
    let qq = q * q;
    let e2 = (qq - 1) / 2;
    let e3 = (qq - 1) / 3;
    let omega = (0u64, 1u64);
    let omega2 = (q - 1, q - 1);
    let one = (1u64, 0u64);
    let mut sum = EisensteinInt::zero();
    for u in 0..q {
        for v in 0..q {
            let a = (u, v);
            if a == (0, 0) || a == one {
                continue;
            }
            let phi = crate::eisenstein::fq2_pow(a, e2, q);
            let b = ((q - u) % q + 1, (q - v) % q);
            let b = (b.0 % q, b.1);
            let chi = crate::eisenstein::fq2_pow(b, e3, q);
            let unit = if chi == one {
                EisensteinInt::one()
            } else if chi == omega {
                EisensteinInt::rho()
            } else if chi == omega2 {
                EisensteinInt::rho().mul(&EisensteinInt::rho())
            } else {
                unreachable!("cubic power lands on a cube root of unity")
            };
            if phi == one {
                sum = sum.add(&unit);
            } else {
                sum = sum.sub(&unit);
            }
        }
    }
    Ok((sum, EisensteinInt::new(q as i64, 0)))
}

/// An element of the CM field as a pair of rationals `x + y*rho`.
#[derive(Clone, PartialEq, Eq)]
struct KElem {
    x: BigRational,
    y: BigRational,
}

impl KElem {
    fn zero() -> KElem {
        KElem { x: BigRational::zero(), y: BigRational::zero() }
    }

    fn from_eisenstein(z: &EisensteinInt) -> KElem {
        KElem { x: BigRational::from(z.a.clone()), y: BigRational::from(z.b.clone()) }
    }

    fn add(&self, r: &KElem) -> KElem {
        KElem { x: &self.x + &r.x, y: &self.y + &r.y }
    }

    fn sub(&self, r: &KElem) -> KElem {
        KElem { x: &self.x - &r.x, y: &self.y - &r.y }
    }

    fn neg(&self) -> KElem {
        KElem { x: -self.x.clone(), y: -self.y.clone() }
    }

    fn mul(&self, r: &KElem) -> KElem {
        // (x1 + y1 rho)(x2 + y2 rho) with rho^2 = -1 - rho
        let xx = &self.x * &r.x;
        let yy = &self.y * &r.y;
        let cross = &self.x * &r.y + &self.y * &r.x;
        KElem { x: xx - &yy, y: cross - yy }
    }

    fn inv(&self) -> Option<KElem> {
        // conjugate (x - y) - y rho over the rational norm
        let norm = &self.x * &self.x - &self.x * &self.y + &self.y * &self.y;
        if norm.is_zero() {
            return None;
        }
        let cx = &self.x - &self.y;
        let cy = -self.y.clone();
        Some(KElem { x: cx / &norm, y: cy / norm })
    }

    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

/// Affine point or the origin on `y^2 + a3*y = x^3` over the CM field.
#[derive(Clone, PartialEq, Eq)]
enum KPoint {
    Origin,
    Affine(KElem, KElem),
}

fn k_add(p: &KPoint, q: &KPoint, a3: &KElem) -> KPoint {
    match (p, q) {
        (KPoint::Origin, _) => q.clone(),
        (_, KPoint::Origin) => p.clone(),
        (KPoint::Affine(x1, y1), KPoint::Affine(x2, y2)) => {
            if x1 == x2 && y1.add(y2).add(a3).is_zero() {
                return KPoint::Origin;
            }
            let slope = if x1 == x2 {
                let num = x1.mul(x1).mul(&KElem {
                    x: BigRational::from(BigInt::from(3)),
                    y: BigRational::zero(),
                });
                let den = y1.add(y1).add(a3);
                num.mul(&den.inv().expect("non-vertical tangent"))
            } else {
                let num = y2.sub(y1);
                let den = x2.sub(x1);
                num.mul(&den.inv().expect("distinct abscissae"))
            };
            let x3 = slope.mul(&slope).sub(x1).sub(x2);
            let y3 = slope.mul(&x1.sub(&x3)).sub(y1).sub(a3);
            KPoint::Affine(x3, y3)
        }
    }
}

fn split_reduction_count(curve: &PrimaryPrime, p: u64) -> Result<u64> {
    let place = split_prime(p)?;
    count_points_split(curve, &place)
}

fn torsion_bound(counts: &[(u64, u64)]) -> u64 {
    let mut candidates: Vec<u64> = Vec::new();
    for &(_, c) in counts {
        let mut c = c;
        let mut d = 2u64;
        while d * d <= c {
            if c % d == 0 {
                if !candidates.contains(&d) {
                    candidates.push(d);
                }
                while c % d == 0 {
                    c /= d;
                }
            }
            d += 1;
        }
        if c > 1 && !candidates.contains(&c) {
            candidates.push(c);
        }
    }
    let mut bound = 1u64;
    for &r in &candidates {
        let mut min_v = u32::MAX;
        for &(ch, c) in counts {
            if ch == r {
                continue;
            }
            let mut v = 0u32;
            let mut c = c;
            while c % r == 0 {
                v += 1;
                c /= r;
            }
            min_v = min_v.min(v);
        }
        if min_v == u32::MAX {
            min_v = 0;
        }
        bound *= r.pow(min_v);
    }
    bound
}

/// Certifies the torsion order of the curve over the CM field: the two
/// affine points above `x = 0` form an exact order-three subgroup, and
/// reduction counts at enough places push the upper bound down onto it.
pub fn torsion_order(curve: &PrimaryPrime) -> Result<u64> {
    let a3 = KElem::from_eisenstein(curve.lambda());
    let p = KPoint::Affine(KElem::zero(), KElem::zero());
    let minus_p = KPoint::Affine(KElem::zero(), a3.neg());
    let double = k_add(&p, &p, &a3);
    if double != minus_p {
        return Err(Error::InternalInconsistency(curve.ell()));
    }
    if k_add(&double, &p, &a3) != KPoint::Origin {
        return Err(Error::InternalInconsistency(curve.ell()));
    }
    let mut counts: Vec<(u64, u64)> = Vec::new();
    for q in [5u64, 11] {
        counts.push((q, count_points_inert(curve, q)?));
    }
    if torsion_bound(&counts) == 3 {
        return Ok(3);
    }
    for q in [2u64, 17, 23, 29] {
        counts.push((q, count_points_inert(curve, q)?));
        if torsion_bound(&counts) == 3 {
            return Ok(3);
        }
    }
    for p in primes_up_to(200) {
        if p % 3 == 1 && p != curve.ell() {
            counts.push((p, split_reduction_count(curve, p)?));
            if torsion_bound(&counts) == 3 {
                return Ok(3);
            }
        }
    }
    Err(Error::Invalid(format!(
        "torsion bound for norm {} stuck above three",
        curve.ell()
    )))
}
