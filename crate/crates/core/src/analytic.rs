//! Numerical evaluation on the hexagonal period lattice: the Weierstrass
//! pair for `y^2 = 4x^3 - 27`, the degree-three quotient functions built
//! from it, elliptic Gauss sums over cubic-residue kernels, the analytic
//! cube root of a primary prime, and the rounded normalized coefficient.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::eisenstein::{mul_mod, pow_mod, EisensteinInt, PrimaryPrime};
use crate::hp::{Complex, Constants, Real};
use crate::series;
use crate::{Error, Result};

fn g_rationals(nmax: usize) -> Arc<Vec<num_rational::BigRational>> {
    static CACHE: OnceLock<Mutex<Arc<Vec<num_rational::BigRational>>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(Arc::new(Vec::new())));
    let mut guard = cell.lock().unwrap();
    if guard.len() <= nmax {
        let target = nmax.max(guard.len() * 2).max(32);
        *guard = Arc::new(series::eisenstein_g(target));
    }
    guard.clone()
}

/// Precision-bound evaluation context: the lattice-sum coefficients of the
/// Weierstrass expansion rounded once per working precision.
pub struct WpContext {
    bits: u32,
    consts: Arc<Constants>,
    p_coeffs: Vec<Real>,
    dp_coeffs: Vec<Real>,
    radius_sq: Real,
}

impl WpContext {
    pub fn get(bits: u32) -> Arc<WpContext> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<WpContext>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(c) = cache.lock().unwrap().get(&bits) {
            return c.clone();
        }
        let ctx = Arc::new(WpContext::new(bits));
        cache.lock().unwrap().entry(bits).or_insert_with(|| ctx.clone()).clone()
    }

    fn new(bits: u32) -> WpContext {
        let consts = Constants::get(bits);
        // inside the halving radius 0.3*varpi each series term gains
        // 6*log2(1/0.3) > 10 bits
        let nterms = (bits as usize) / 10 + 16;
        let g = g_rationals(nterms);
        let mut p_coeffs = Vec::with_capacity(nterms);
        let mut dp_coeffs = Vec::with_capacity(nterms);
        for n in 1..=nterms {
            let k = BigInt::from(6 * n as u64 - 1);
            let c = num_rational::BigRational::from(k.clone()) * &g[n];
            p_coeffs.push(Real::from_ratio(&c, bits));
            let d = c * num_rational::BigRational::from(BigInt::from(6 * n as u64 - 2));
            dp_coeffs.push(Real::from_ratio(&d, bits));
        }
        let vsq = consts.varpi.mul(&consts.varpi);
        let radius_sq = vsq.mul_int(9).div_int(100);
        WpContext { bits, consts, p_coeffs, dp_coeffs, radius_sq }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn constants(&self) -> &Constants {
        &self.consts
    }

    /// Embeds `a + b*rho` with rho mapped to `(-1 + i*sqrt3)/2`.
    pub fn embed(&self, z: &EisensteinInt) -> Complex {
        let a = Real::from_bigint(&z.a, self.bits);
        let b = Real::from_bigint(&z.b, self.bits);
        let re = a.sub(&b.half());
        let im = b.mul(&self.consts.sqrt3).half();
        Complex::new(re, im)
    }

    fn lattice_vector(&self, m: &BigInt, n: &BigInt) -> Complex {
        self.embed(&EisensteinInt::new(m.clone(), n.clone())).mul_real(&self.consts.varpi)
    }

    /// Translates into the fundamental cell by the closest of the nine
    /// lattice points around the basis-coordinate rounding.
    fn reduce(&self, w: &Complex) -> Result<Complex> {
        let varpi = &self.consts.varpi;
        let y = w.im.mul_int(2).div(&varpi.mul(&self.consts.sqrt3));
        let x = w.re.div(varpi).add(&y.half());
        let m0 = x.round();
        let n0 = y.round();
        let mut best: Option<Complex> = None;
        for dm in -1..=1i32 {
            for dn in -1..=1i32 {
                let m = &m0 + BigInt::from(dm);
                let n = &n0 + BigInt::from(dn);
                let cand = w.sub(&self.lattice_vector(&m, &n));
                let better = match &best {
                    None => true,
                    Some(b) => cand.norm_sqr().lt(&b.norm_sqr()),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        let best = best.unwrap();
        if best.norm_sqr().lt(&Real::pow2(-(self.bits as i64 / 2), self.bits)) {
            return Err(Error::LatticePoint);
        }
        Ok(best)
    }

    fn series_pair(&self, v: &Complex) -> (Complex, Complex) {
        let v2 = v.square();
        let v3 = v2.mul(v);
        let q = v3.square();
        let mut s1 = Complex::zero(self.bits);
        let mut s2 = Complex::zero(self.bits);
        for n in (0..self.p_coeffs.len()).rev() {
            s1 = s1.mul(&q).add(&Complex::from_real(self.p_coeffs[n].clone()));
            s2 = s2.mul(&q).add(&Complex::from_real(self.dp_coeffs[n].clone()));
        }
        let vinv = v.recip();
        let vinv2 = vinv.square();
        let p = vinv2.add(&v2.square().mul(&s1));
        let dp = vinv2.mul(&vinv).mul_int(-2).add(&v3.mul(&s2));
        (p, dp)
    }

    fn double_point(&self, x: &Complex, y: &Complex) -> Result<(Complex, Complex)> {
        if y.norm_sqr().lt(&Real::pow2(-(self.bits as i64 / 2), self.bits)) {
            return Err(Error::PoleHit("tangent at a two-division point"));
        }
        let m = x.square().mul_int(6).div(y);
        let x2 = m.square().half().half().sub(&x.mul_int(2));
        let y2 = m.mul(&x2.sub(x)).add(y).neg();
        Ok((x2, y2))
    }

    /// The Weierstrass pair at `w`, computed by series inside the halving
    /// radius and pushed back out by point doubling.
    pub fn wp_pair(&self, w: &Complex) -> Result<(Complex, Complex)> {
        let reduced = self.reduce(w)?;
        let mut v = reduced;
        let mut halvings = 0u32;
        while self.radius_sq.lt(&v.norm_sqr()) {
            v = v.half();
            halvings += 1;
        }
        let (mut p, mut dp) = self.series_pair(&v);
        for _ in 0..halvings {
            let next = self.double_point(&p, &dp)?;
            p = next.0;
            dp = next.1;
        }
        debug_assert!(
            self.curve_residual(&p, &dp).lt(&Real::pow2(-(self.bits as i64) + 24, self.bits)),
            "curve identity residual too large"
        );
        Ok((p, dp))
    }

    /// Relative defect in `y^2 = 4x^3 - 27` for a computed pair.
    pub fn curve_residual(&self, p: &Complex, dp: &Complex) -> Real {
        let twenty_seven = Complex::from_real(Real::from_int(27, self.bits));
        let res = dp.square().sub(&p.square().mul(p).mul_int(4)).add(&twenty_seven);
        let pa = p.abs();
        let scale = pa.mul(&pa).mul(&pa);
        let one = Real::from_int(1, self.bits);
        let denom = if scale.lt(&one) { one } else { scale };
        res.abs().div(&denom)
    }

    /// The quotient pair `(6 wp / (9 + wp'), (wp' - 9) / (9 + wp'))`.
    pub fn phi_psi(&self, w: &Complex) -> Result<(Complex, Complex)> {
        let (p, dp) = self.wp_pair(w)?;
        let nine = Complex::from_real(Real::from_int(9, self.bits));
        let den = dp.add(&nine);
        if den.norm_sqr().lt(&Real::pow2(-(self.bits as i64 / 2), self.bits)) {
            return Err(Error::PoleHit("vanishing phi denominator"));
        }
        let phi = p.mul_int(6).div(&den);
        let psi = dp.sub(&nine).div(&den);
        Ok((phi, psi))
    }
}

/// One full pass over the torsion nodes of a primary prime: the kernel
/// Gauss sum, its averaged cross-check, the analytic cube root, and the
/// unrounded normalized coefficient.
pub struct GaussData {
    pub bits: u32,
    pub gauss_sum: Complex,
    pub lambda_tilde: Complex,
    pub alpha_raw: Complex,
}

pub fn gauss_data(p: &PrimaryPrime, bits: u32) -> Result<GaussData> {
    let class = p.residue_class_mod_9();
    if class != 4 && class != 7 {
        return Err(Error::UnsupportedResidueClass(p.ell()));
    }
    let ctx = WpContext::get(bits);
    let ell = p.ell();
    let scale = ctx.consts.varpi.div(&Real::from_int(ell as i64, bits));
    let base = ctx.embed(&p.lambda().conj()).mul_real(&scale);
    let exp3 = (ell - 1) / 3;
    let r1 = p.rho_image() % ell;
    let r2 = mul_mod(r1, r1, ell);
    let half_s3 = ctx.consts.sqrt3.half();
    let minus_half = Real::from_int(-1, bits).half();
    let units = [
        Complex::new(Real::from_int(1, bits), Real::zero(bits)),
        Complex::new(minus_half.clone(), half_s3.clone()),
        Complex::new(minus_half, half_s3.neg()),
    ];
    let mut ker_sum = Complex::zero(bits);
    let mut full_sum = Complex::zero(bits);
    let mut prod = Complex::from_real(Real::from_int(1, bits));
    for r in 1..ell {
        let node = base.mul_int(r as i64);
        let phi = ctx.phi_psi(&node)?.0;
        let f = if class == 7 { phi.clone() } else { phi.recip() };
        let t = pow_mod(r, exp3, ell);
        let cls = if t == 1 {
            0
        } else if t == r1 {
            1
        } else if t == r2 {
            2
        } else {
            return Err(Error::InternalInconsistency(ell));
        };
        full_sum = full_sum.add(&f.mul(&units[cls]));
        if cls == 0 {
            ker_sum = ker_sum.add(&f);
            prod = prod.mul(&phi);
        }
    }
    let averaged = full_sum.div_int(3);
    let gap = ker_sum.sub(&averaged).abs();
    let one = Real::from_int(1, bits);
    let ker_mag = ker_sum.abs();
    let scale_mag = if ker_mag.lt(&one) { one } else { ker_mag };
    if !gap.lt(&Real::pow2(-(bits as i64) + 40, bits).mul(&scale_mag)) {
        return Err(Error::InternalInconsistency(ell));
    }
    let lam_c = ctx.embed(p.lambda());
    let cube_gap = prod.square().mul(&prod).sub(&lam_c).abs();
    if !cube_gap.lt(&Real::pow2(-(bits as i64) + 24, bits).mul(&lam_c.abs())) {
        return Err(Error::InternalInconsistency(ell));
    }
    let alpha_raw = ker_sum.div(&prod.square());
    Ok(GaussData { bits, gauss_sum: ker_sum, lambda_tilde: prod, alpha_raw })
}

pub fn gauss_sum(p: &PrimaryPrime, bits: u32) -> Result<Complex> {
    Ok(gauss_data(p, bits)?.gauss_sum)
}

/// The analytic cube root of the prime: the kernel product of phi values,
/// whose cube recovers the prime itself.
pub fn lambda_tilde(p: &PrimaryPrime, bits: u32) -> Result<Complex> {
    Ok(gauss_data(p, bits)?.lambda_tilde)
}

/// A rounded normalized coefficient together with the precision that
/// stabilized it and the rounding residual at that precision.
pub struct Alpha {
    pub value: EisensteinInt,
    pub bits: u32,
    pub residual: Real,
}

fn round_to_eisenstein(raw: &Complex, consts: &Constants) -> (EisensteinInt, Real) {
    let y = raw.im.mul_int(2).div(&consts.sqrt3);
    let b = y.round();
    let x = raw.re.add(&raw.im.div(&consts.sqrt3));
    let a = x.round();
    let value = EisensteinInt::new(a, b);
    let bits = raw.bits();
    let av = Real::from_bigint(&value.a, bits);
    let bv = Real::from_bigint(&value.b, bits);
    let embedded = Complex::new(av.sub(&bv.half()), bv.mul(&consts.sqrt3).half());
    let residual = raw.sub(&embedded).abs();
    (value, residual)
}

fn check_membership(p: &PrimaryPrime, value: &EisensteinInt) -> Result<()> {
    let three = BigInt::from(3);
    let n_mod = p.n().mod_floor(&three);
    let n_mod: u8 = if n_mod == BigInt::from(2) {
        2
    } else if n_mod == BigInt::from(1) {
        1
    } else {
        0
    };
    let class = p.residue_class_mod_9();
    let (rot, target) = if class == 7 {
        ((3 - n_mod) % 3, EisensteinInt::one())
    } else {
        (n_mod % 3, EisensteinInt::one().neg())
    };
    let mut v = value.clone();
    for _ in 0..rot {
        v = v.mul_rho();
    }
    let d = v.sub(&target);
    if (&d.a % &three).is_zero() && (&d.b % &three).is_zero() {
        Ok(())
    } else {
        Err(Error::MembershipViolation(format!(
            "coefficient {}+{}rho for norm {} misses its unit class",
            value.a,
            value.b,
            p.ell()
        )))
    }
}

/// Rounds the normalized coefficient over a doubling precision ladder,
/// accepting once two consecutive precisions agree and the rounding
/// residual is negligible.
pub fn alpha_with_ladder(p: &PrimaryPrime, start_bits: u32, max_bits: u32) -> Result<Alpha> {
    let tol = |bits: u32| Real::pow2(-32, bits);
    let mut prev: Option<EisensteinInt> = None;
    let mut bits = start_bits;
    loop {
        let data = gauss_data(p, bits)?;
        let consts = Constants::get(bits);
        let (value, residual) = round_to_eisenstein(&data.alpha_raw, &consts);
        if residual.lt(&tol(bits)) {
            if prev.as_ref() == Some(&value) {
                check_membership(p, &value)?;
                return Ok(Alpha { value, bits, residual });
            }
            prev = Some(value);
        } else {
            prev = None;
        }
        if bits >= max_bits {
            return Err(Error::PrecisionExhausted(max_bits));
        }
        bits *= 2;
    }
}

pub fn alpha(p: &PrimaryPrime) -> Result<Alpha> {
    alpha_with_ladder(p, 128, 4096)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::split_prime;

    fn assert_small(x: &Real, exp: i64) {
        assert!(x.lt(&Real::pow2(exp, x.bits())), "value {} not below 2^{}", x.to_f64(), exp);
    }

    #[test]
    fn weierstrass_special_values() {
        for bits in [128u32, 256] {
            let ctx = WpContext::get(bits);
            let third = Complex::from_real(ctx.constants().varpi.div_int(3));
            let (p, dp) = ctx.wp_pair(&third).unwrap();
            let tol = -(bits as i64) + 24;
            assert_small(&p.sub(&Complex::from_real(Real::from_int(3, bits))).abs(), tol);
            assert_small(&dp.sub(&Complex::from_real(Real::from_int(-9, bits))).abs(), tol);
            assert_small(&ctx.curve_residual(&p, &dp), tol);
        }
    }

    #[test]
    fn weierstrass_ramified_third_division_value() {
        let bits = 192u32;
        let ctx = WpContext::get(bits);
        let w = ctx
            .embed(&EisensteinInt::one_minus_rho())
            .mul_real(&ctx.constants().varpi.div_int(3));
        let (p, dp) = ctx.wp_pair(&w).unwrap();
        assert_small(&p.abs(), -160);
        let target = Complex::new(Real::zero(bits), ctx.constants().sqrt3.mul_int(-3));
        assert_small(&dp.sub(&target).abs(), -160);
    }

    #[test]
    fn weierstrass_periodicity_and_homogeneity() {
        let bits = 160u32;
        let ctx = WpContext::get(bits);
        let w = Complex::new(
            Real::from_ratio(&series::rat(31, 100), bits),
            Real::from_ratio(&series::rat(17, 100), bits),
        );
        let (p, dp) = ctx.wp_pair(&w).unwrap();
        let shift = ctx.embed(&EisensteinInt::new(3, -2)).mul_real(&ctx.constants().varpi);
        let (p2, dp2) = ctx.wp_pair(&w.add(&shift)).unwrap();
        assert_small(&p.sub(&p2).abs(), -130);
        assert_small(&dp.sub(&dp2).abs(), -130);
        let rho = ctx.embed(&EisensteinInt::rho());
        let (p3, dp3) = ctx.wp_pair(&w.mul(&rho)).unwrap();
        assert_small(&p3.sub(&p.mul(&rho)).abs(), -130);
        assert_small(&dp3.sub(&dp).abs(), -130);
    }

    #[test]
    fn lattice_point_rejected() {
        let ctx = WpContext::get(128);
        let w = ctx.embed(&EisensteinInt::new(2, 1)).mul_real(&ctx.constants().varpi);
        assert!(matches!(ctx.wp_pair(&w), Err(Error::LatticePoint)));
    }

    #[test]
    fn cube_root_recovers_prime() {
        for ell in [7u64, 13, 31] {
            let p = split_prime(ell).unwrap();
            let bits = 192;
            let lt = lambda_tilde(&p, bits).unwrap();
            let ctx = WpContext::get(bits);
            let gap = lt.square().mul(&lt).sub(&ctx.embed(p.lambda())).abs();
            assert!(
                gap.lt(&Real::pow2(-(bits as i64) + 16, bits).mul(&ctx.embed(p.lambda()).abs())),
                "cube of the kernel product misses the prime for {ell}"
            );
        }
    }

    #[test]
    fn normalized_coefficients_first_two_primes() {
        let a7 = alpha(&split_prime(7).unwrap()).unwrap();
        assert_eq!(a7.value, EisensteinInt::rho());
        let a13 = alpha(&split_prime(13).unwrap()).unwrap();
        assert_eq!(a13.value, EisensteinInt::new(1, 1));
        assert!(a13.residual.lt(&Real::pow2(-32, a13.residual.bits())));
    }

    #[test]
    fn coefficient_conjugation_symmetry() {
        let p = split_prime(31).unwrap();
        let a = alpha(&p).unwrap();
        let ac = alpha(&p.conjugate()).unwrap();
        assert_eq!(ac.value, a.value.conj());
    }

    #[test]
    fn residue_class_one_rejected() {
        let q = split_prime(19).unwrap();
        assert!(matches!(alpha(&q), Err(Error::UnsupportedResidueClass(19))));
    }
}
