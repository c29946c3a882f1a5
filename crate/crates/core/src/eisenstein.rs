//! Arithmetic in `Z[rho]`, `rho = e^{2 pi i/3}`, with `rho^2 = -1 - rho`.
//!
//! The ring is Euclidean with norm `N(a + b rho) = a^2 - ab + b^2` and unit
//! group `{±1, ±rho, ±rho^2}`. An element coprime to 3 is *primary* when it
//! is congruent to 1 mod 3; every such element has exactly one primary
//! associate, which pins down a canonical generator for each prime ideal
//! away from `(1 - rho)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::{Error, Result};

/// An element `a + b*rho` of the hexagonal lattice ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EisensteinInt {
    pub a: BigInt,
    pub b: BigInt,
}

impl serde::Serialize for EisensteinInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("EisensteinInt", 2)?;
        s.serialize_field("a", &self.a.to_string())?;
        s.serialize_field("b", &self.b.to_string())?;
        s.end()
    }
}

impl EisensteinInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        EisensteinInt { a: a.into(), b: b.into() }
    }

    pub fn zero() -> Self {
        EisensteinInt::new(0, 0)
    }

    pub fn one() -> Self {
        EisensteinInt::new(1, 0)
    }

    pub fn rho() -> Self {
        EisensteinInt::new(0, 1)
    }

    /// `rho^2 = -1 - rho`, the complex conjugate of `rho`.
    pub fn rho_bar() -> Self {
        EisensteinInt::new(-1, -1)
    }

    /// The ramified element `1 - rho` of norm 3.
    pub fn one_minus_rho() -> Self {
        EisensteinInt::new(1, -1)
    }

    /// The six units, ordered as `rho^k` then `-rho^k`.
    pub fn units() -> [EisensteinInt; 6] {
        let u = [
            EisensteinInt::one(),
            EisensteinInt::rho(),
            EisensteinInt::rho_bar(),
        ];
        [
            u[0].clone(),
            u[1].clone(),
            u[2].clone(),
            u[0].neg(),
            u[1].neg(),
            u[2].neg(),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Complex conjugate: `conj(a + b rho) = (a - b) - b rho`.
    pub fn conj(&self) -> Self {
        EisensteinInt { a: &self.a - &self.b, b: -&self.b }
    }

    pub fn neg(&self) -> Self {
        EisensteinInt { a: -&self.a, b: -&self.b }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        EisensteinInt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        EisensteinInt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }

    /// `(a + b rho)(c + d rho) = (ac - bd) + (ad + bc - bd) rho`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        EisensteinInt { a: ac - &bd, b: ad_bc - bd }
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        EisensteinInt { a: &self.a * k, b: &self.b * k }
    }

    /// Multiplication by `rho`: `(a + b rho) rho = -b + (a - b) rho`.
    pub fn mul_rho(&self) -> Self {
        EisensteinInt { a: -&self.b, b: &self.a - &self.b }
    }

    pub fn mul_unit(&self, u: CubicValue) -> Self {
        match u {
            CubicValue::Zero => EisensteinInt::zero(),
            CubicValue::Unit(0) => self.clone(),
            CubicValue::Unit(1) => self.mul_rho(),
            CubicValue::Unit(_) => self.mul_rho().mul_rho(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = EisensteinInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact division; `None` when `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let n = rhs.norm();
        if n.is_zero() {
            return None;
        }
        let num = self.mul(&rhs.conj());
        let (qa, ra) = num.a.div_rem(&n);
        let (qb, rb) = num.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(EisensteinInt { a: qa, b: qb })
        } else {
            None
        }
    }

    pub fn divides(&self, x: &Self) -> bool {
        x.exact_div(self).is_some()
    }

    /// Largest `k` with `pi^k | self`, together with `self / pi^k`.
    pub fn valuation(&self, pi: &Self) -> (u32, Self) {
        assert!(!self.is_zero(), "valuation of zero");
        let mut v = 0;
        let mut cur = self.clone();
        while let Some(next) = cur.exact_div(pi) {
            cur = next;
            v += 1;
        }
        (v, cur)
    }

    /// `self == 1 (mod 3)`.
    pub fn is_primary(&self) -> bool {
        (&self.a - BigInt::one()).mod_floor(&BigInt::from(3)).is_zero()
            && self.b.mod_floor(&BigInt::from(3)).is_zero()
    }

    /// Whether `(1 - rho)` divides `self`, i.e. `a + b == 0 (mod 3)`.
    pub fn ramified_divides(&self) -> bool {
        (&self.a + &self.b).mod_floor(&BigInt::from(3)).is_zero()
    }

    /// The unique unit congruent to `self` mod 3, when `self` is coprime
    /// to 3. Units represent all invertible residues mod 3.
    pub fn unit_mod_three(&self) -> Option<EisensteinInt> {
        let three = BigInt::from(3);
        let ra = self.a.mod_floor(&three);
        let rb = self.b.mod_floor(&three);
        EisensteinInt::units()
            .into_iter()
            .find(|u| u.a.mod_floor(&three) == ra && u.b.mod_floor(&three) == rb)
    }

    /// Residue `±1` of `self` mod `(1 - rho)` via `a + b rho -> a + b mod 3`,
    /// or 0 when ramified.
    pub fn residue_mod_ramified(&self) -> i8 {
        let r = (&self.a + &self.b).mod_floor(&BigInt::from(3));
        match r.to_u8() {
            Some(0) => 0,
            Some(1) => 1,
            _ => -1,
        }
    }

    /// True for primary elements generating a prime ideal: either the norm
    /// is a rational prime, or the element is `-q` for a rational prime
    /// `q == 2 (mod 3)`.
    pub fn is_primary_prime(&self) -> bool {
        if !self.is_primary() {
            return false;
        }
        if self.b.is_zero() {
            let q = -&self.a;
            return q.is_positive()
                && q.mod_floor(&BigInt::from(3)) == BigInt::from(2)
                && q.to_u64().map(is_prime_u64).unwrap_or(false);
        }
        self.norm().to_u64().map(is_prime_u64).unwrap_or(false)
    }
}

impl fmt::Debug for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*rho", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*rho", self.a, -&self.b)
        } else {
            write!(f, "{} + {}*rho", self.a, self.b)
        }
    }
}

/// A value of the cubic residue character: zero or `rho^k`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CubicValue {
    Zero,
    Unit(u8),
}

impl CubicValue {
    pub fn one() -> Self {
        CubicValue::Unit(0)
    }

    pub fn rho_power(k: u8) -> Self {
        CubicValue::Unit(k % 3)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CubicValue::Unit(0))
    }

    pub fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (CubicValue::Unit(i), CubicValue::Unit(j)) => CubicValue::Unit((i + j) % 3),
            _ => CubicValue::Zero,
        }
    }

    pub fn conj(self) -> Self {
        match self {
            CubicValue::Unit(k) => CubicValue::Unit((3 - k) % 3),
            CubicValue::Zero => CubicValue::Zero,
        }
    }

    pub fn to_eisenstein(self) -> EisensteinInt {
        match self {
            CubicValue::Zero => EisensteinInt::zero(),
            CubicValue::Unit(0) => EisensteinInt::one(),
            CubicValue::Unit(1) => EisensteinInt::rho(),
            CubicValue::Unit(_) => EisensteinInt::rho_bar(),
        }
    }

    /// Exponent `k` with `self = rho^k`, or `None` for zero.
    pub fn exponent(self) -> Option<u8> {
        match self {
            CubicValue::Unit(k) => Some(k),
            CubicValue::Zero => None,
        }
    }
}

/// A split rational prime `ell == 1 (mod 3)` together with its primary
/// generator `lambda = a + b rho = 3m + 1 + 3n rho`, `n > 0`.
///
/// Carries the residue isomorphism `Z[rho]/(lambda) ~ Z/ell` in the form of
/// the image of `rho`.
#[derive(Clone, Debug)]
pub struct PrimaryPrime {
    lambda: EisensteinInt,
    ell: u64,
    m: BigInt,
    n: BigInt,
    rho_image: u64,
}

impl PrimaryPrime {
    /// Builds the datum from a primary generator whose norm is prime.
    pub fn from_lambda(lambda: EisensteinInt) -> Result<Self> {
        if !lambda.is_primary() {
            return Err(Error::NotPrimary(lambda.to_string()));
        }
        let norm = lambda.norm();
        let ell = norm
            .to_u64()
            .filter(|&p| is_prime_u64(p))
            .ok_or_else(|| Error::NotPrimary(lambda.to_string()))?;
        if ell % 3 != 1 {
            return Err(Error::NotSplit(ell));
        }
        let m = (&lambda.a - 1) / 3;
        let n = &lambda.b / 3;
        let b_inv = mod_inverse(lambda.b.mod_floor(&norm).to_u64().unwrap(), ell)
            .expect("b is invertible mod ell for a split prime");
        let a_mod = lambda.a.mod_floor(&norm).to_u64().unwrap();
        let rho_image = (ell - a_mod % ell) % ell * b_inv % ell;
        Ok(PrimaryPrime { lambda, ell, m, n, rho_image })
    }

    pub fn lambda(&self) -> &EisensteinInt {
        &self.lambda
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn m(&self) -> &BigInt {
        &self.m
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    /// Image of `rho` under `Z[rho]/(lambda) ~ Z/ell`.
    pub fn rho_image(&self) -> u64 {
        self.rho_image
    }

    pub fn residue_class_mod_9(&self) -> u64 {
        self.ell % 9
    }

    /// The conjugate datum, generated by `conj(lambda)`.
    pub fn conjugate(&self) -> Self {
        PrimaryPrime::from_lambda(self.lambda.conj()).expect("conjugate of a primary prime")
    }
}

/// Finds the primary generator `lambda = a + b rho` of norm `ell` with
/// `b > 0` (so `n > 0`), scanning `b = 3, 6, ...` with `3 b^2 <= 4 ell`.
pub fn split_prime(ell: u64) -> Result<PrimaryPrime> {
    if !is_prime_u64(ell) || ell % 3 != 1 {
        return Err(Error::NotSplit(ell));
    }
    let mut found: Option<(i64, i64)> = None;
    let mut b: u64 = 3;
    while 3 * b * b <= 4 * ell {
        let disc = 4 * ell - 3 * b * b;
        let s = disc.isqrt();
        if s * s == disc {
            for a2 in [b as i64 + s as i64, b as i64 - s as i64] {
                if a2 % 2 != 0 {
                    continue;
                }
                let a = a2 / 2;
                if a.rem_euclid(3) != 1 {
                    continue;
                }
                if a * a - a * b as i64 + (b * b) as i64 == ell as i64 {
                    assert!(
                        found.is_none() || found == Some((a, b as i64)),
                        "primary generator with positive rho part must be unique"
                    );
                    found = Some((a, b as i64));
                }
            }
        }
        b += 3;
    }
    let (a, b) = found.ok_or(Error::NotSplit(ell))?;
    PrimaryPrime::from_lambda(EisensteinInt::new(a, b))
}

/// Image of `nu` under the residue isomorphism `Z[rho]/(lambda) ~ Z/ell`.
pub fn residue_iso(nu: &EisensteinInt, p: &PrimaryPrime) -> u64 {
    let ell = BigInt::from(p.ell);
    let x = nu.a.mod_floor(&ell).to_u64().unwrap();
    let y = nu.b.mod_floor(&ell).to_u64().unwrap();
    ((x as u128 + y as u128 * p.rho_image as u128) % p.ell as u128) as u64
}

/// The cubic residue character `chi_lambda(nu) == nu^{(ell-1)/3} (mod lambda)`,
/// valued in the cube roots of unity (or zero on multiples of `lambda`).
pub fn cubic_character(nu: &EisensteinInt, p: &PrimaryPrime) -> Result<CubicValue> {
    let t = residue_iso(nu, p);
    if t == 0 {
        return Ok(CubicValue::Zero);
    }
    let e = pow_mod(t, (p.ell - 1) / 3, p.ell);
    cube_root_exponent(e, p)
}

/// Matches a cube root of unity in `Z/ell` against `{1, r, r^2}` where `r`
/// is the image of `rho`.
fn cube_root_exponent(e: u64, p: &PrimaryPrime) -> Result<CubicValue> {
    if e == 1 {
        Ok(CubicValue::Unit(0))
    } else if e == p.rho_image {
        Ok(CubicValue::Unit(1))
    } else if e == mul_mod(p.rho_image, p.rho_image, p.ell) {
        Ok(CubicValue::Unit(2))
    } else {
        Err(Error::InternalInconsistency(p.ell))
    }
}

/// Cubic residue symbol with an arbitrary primary prime modulus: the split
/// case goes through the residue isomorphism, the inert case through
/// `F_{q^2} = F_q[w]/(w^2 + w + 1)`.
pub fn cubic_symbol(nu: &EisensteinInt, modulus: &EisensteinInt) -> Result<CubicValue> {
    if !modulus.is_primary_prime() {
        return Err(Error::NotPrimary(modulus.to_string()));
    }
    if modulus.b.is_zero() {
        let q = (-&modulus.a).to_u64().unwrap();
        let qq = BigInt::from(q);
        let x = nu.a.mod_floor(&qq).to_u64().unwrap();
        let y = nu.b.mod_floor(&qq).to_u64().unwrap();
        if x == 0 && y == 0 {
            return Ok(CubicValue::Zero);
        }
        let e = fq2_pow((x, y), (q * q - 1) / 3, q);
        match e {
            (1, 0) => Ok(CubicValue::Unit(0)),
            (0, 1) => Ok(CubicValue::Unit(1)),
            _ if e == (q - 1, q - 1) => Ok(CubicValue::Unit(2)),
            _ => Err(Error::InternalInconsistency(q)),
        }
    } else {
        let p = PrimaryPrime::from_lambda(modulus.clone())?;
        cubic_character(nu, &p)
    }
}

/// Checks `(pi/mu) == (mu/pi)` for distinct primary primes, the cubic
/// reciprocity law.
pub fn cubic_reciprocity_check(pi: &EisensteinInt, mu: &EisensteinInt) -> Result<bool> {
    if !pi.is_primary_prime() {
        return Err(Error::NotPrimary(pi.to_string()));
    }
    if !mu.is_primary_prime() {
        return Err(Error::NotPrimary(mu.to_string()));
    }
    Ok(cubic_symbol(pi, mu)? == cubic_symbol(mu, pi)?)
}

/// One value of the Hecke character: an Eisenstein integer of norm
/// `N(nu)`, or zero on ideals sharing a factor with the conductor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckeValue {
    pub value: EisensteinInt,
}

impl HeckeValue {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Evaluates the Hecke character attached to `p` on the ideal `(nu)`.
///
/// The unit ambiguity of the generator is cancelled by an auxiliary
/// character mod 3 (class `ell == 7 (mod 9)`) or mod `(1 - rho)` (class
/// `ell == 4 (mod 9)`); on primary `nu` the value is
/// `chi_lambda(nu) * conj(nu)`.
pub fn hecke_character(nu: &EisensteinInt, p: &PrimaryPrime) -> Result<HeckeValue> {
    if nu.is_zero() || nu.ramified_divides() {
        return Ok(HeckeValue { value: EisensteinInt::zero() });
    }
    let chi = cubic_character(nu, p)?;
    if chi == CubicValue::Zero {
        return Ok(HeckeValue { value: EisensteinInt::zero() });
    }
    let twisted = match p.residue_class_mod_9() {
        7 => {
            let u = nu.unit_mod_three().expect("nu coprime to 3");
            nu.conj().mul(&u.conj()).mul_unit(chi)
        }
        4 => {
            let sign = nu.residue_mod_ramified();
            let c = nu.conj().mul_unit(chi);
            if sign < 0 {
                c.neg()
            } else {
                c
            }
        }
        cls => return Err(Error::UnsupportedResidueClass(cls)),
    };
    Ok(HeckeValue { value: twisted })
}

/// Deterministic primality for 64-bit inputs (Miller-Rabin with a fixed
/// base set that is exact below 3.3 * 10^24).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod `m` (extended Euclid), `None` when not coprime.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Product in `F_q[w]/(w^2 + w + 1)`, elements as coefficient pairs.
pub(crate) fn fq2_mul(u: (u64, u64), v: (u64, u64), q: u64) -> (u64, u64) {
    // (a + bw)(c + dw) with w^2 = -1 - w.
    let ac = mul_mod(u.0, v.0, q);
    let bd = mul_mod(u.1, v.1, q);
    let ad_bc = (mul_mod(u.0, v.1, q) + mul_mod(u.1, v.0, q)) % q;
    ((ac + q - bd % q) % q, (ad_bc + q - bd % q) % q)
}

/// Power `x^e` in `F_q[w]/(w^2 + w + 1)`, elements as coefficient pairs.
pub(crate) fn fq2_pow(x: (u64, u64), mut e: u64, q: u64) -> (u64, u64) {
    let mut base = x;
    let mut acc = (1u64, 0u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = fq2_mul(acc, base, q);
        }
        base = fq2_mul(base, base, q);
        e >>= 1;
    }
    acc
}

/// Primes up to `bound` inclusive.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| if p { Some(i as u64) } else { None })
        .collect()
}

/// Split primes `ell == 4 or 7 (mod 9)` up to `bound`, the residue classes
/// the Gauss sum construction supports.
pub fn admissible_primes(bound: u64) -> Vec<u64> {
    primes_up_to(bound)
        .into_iter()
        .filter(|&p| p % 9 == 4 || p % 9 == 7)
        .collect()
}
