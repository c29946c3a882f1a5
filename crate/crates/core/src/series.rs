//! Exact truncated Laurent series over the rationals.
//!
//! A series is stored on an exponent *window* `[lo, hi]`: coefficients are
//! exact inside the window, identically zero below it, and unknown above
//! it. Every operation tracks the window of the result, so truncation
//! error can never masquerade as an exact coefficient.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    acc
}

/// Generalized binomial coefficient `alpha choose n`.
pub fn binomial(alpha: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..n {
        let factor = alpha - BigRational::from(BigInt::from(i));
        acc = acc * factor / BigRational::from(BigInt::from(i + 1));
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSeries {
    lo: i64,
    coeffs: Vec<BigRational>,
}

impl RationalSeries {
    /// Series with the given coefficients starting at exponent `lo`.
    pub fn new(lo: i64, coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient window");
        RationalSeries { lo, coeffs }
    }

    /// The zero series known exactly on `[lo, hi]`.
    pub fn zero(lo: i64, hi: i64) -> Self {
        RationalSeries::new(lo, vec![BigRational::zero(); (hi - lo + 1) as usize])
    }

    /// `c * t^k`, known exactly on `[min(0,k), hi]`.
    pub fn monomial(c: BigRational, k: i64, hi: i64) -> Self {
        let lo = k.min(0);
        let mut s = RationalSeries::zero(lo, hi);
        s.coeffs[(k - lo) as usize] = c;
        s
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent with an exactly known coefficient.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Exact coefficient of `t^k`; panics above the known window.
    pub fn coeff(&self, k: i64) -> BigRational {
        assert!(k <= self.hi(), "coefficient {k} beyond window {}", self.hi());
        if k < self.lo {
            BigRational::zero()
        } else {
            self.coeffs[(k - self.lo) as usize].clone()
        }
    }

    /// Lowest exponent with a nonzero known coefficient, if any.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|i| self.lo + i as i64)
    }

    /// Drops exact leading zeros, raising `lo` to the valuation.
    pub fn trimmed(&self) -> Self {
        match self.valuation() {
            Some(v) if v > self.lo => {
                RationalSeries::new(v, self.coeffs[(v - self.lo) as usize..].to_vec())
            }
            Some(_) => self.clone(),
            None => RationalSeries::new(self.hi(), vec![BigRational::zero()]),
        }
    }

    /// Restricts the window to `[lo, hi]`; the requested window must lie
    /// inside the known one (below `lo` coefficients are exact zeros).
    pub fn truncated(&self, hi: i64) -> Self {
        assert!(hi <= self.hi(), "window only reaches {}", self.hi());
        let keep = (hi - self.lo + 1).max(1) as usize;
        RationalSeries::new(self.lo, self.coeffs[..keep].to_vec())
    }

    pub fn neg(&self) -> Self {
        RationalSeries::new(self.lo, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        RationalSeries::new(self.lo, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        RationalSeries::new(self.lo + k, self.coeffs.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let lo = self.lo.min(rhs.lo);
        let hi = self.hi().min(rhs.hi());
        assert!(hi >= lo, "windows do not overlap");
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        RationalSeries::new(lo, coeffs)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = self.trimmed();
        let b = rhs.trimmed();
        let lo = a.lo + b.lo;
        let hi = (a.hi() + b.lo).min(b.hi() + a.lo);
        assert!(hi >= lo, "product window is empty");
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let base = a.lo + i as i64 + b.lo - lo;
            for (j, cb) in b.coeffs.iter().enumerate() {
                let k = base + j as i64;
                if k > hi - lo {
                    break;
                }
                coeffs[k as usize] += ca * cb;
            }
        }
        RationalSeries::new(lo, coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = RationalSeries::monomial(BigRational::one(), 0, self.hi());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reciprocal. The valuation must be known and the window nonempty;
    /// `1/f` on window `[-v, hi - 2v]` for `f` of valuation `v`.
    pub fn recip(&self) -> Self {
        let f = self.trimmed();
        let v = f.valuation().expect("reciprocal of the zero series");
        assert_eq!(v, f.lo);
        let unit = &f.coeffs[0];
        let n = f.coeffs.len();
        let mut inv = vec![BigRational::zero(); n];
        inv[0] = unit.recip();
        for k in 1..n {
            let mut s = BigRational::zero();
            for j in 1..=k {
                if !f.coeffs[j].is_zero() {
                    s += &f.coeffs[j] * &inv[k - j];
                }
            }
            inv[k] = -s / unit;
        }
        RationalSeries::new(-v, inv)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * BigRational::from(BigInt::from(self.lo + i as i64)))
            .collect();
        RationalSeries::new(self.lo - 1, coeffs)
    }

    /// Composition `self(inner)` for a power series `self` (`lo >= 0`) and
    /// an `inner` of valuation at least 1, by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Self {
        assert!(self.lo >= 0, "composition needs a power series outside");
        let Some(v) = inner.valuation() else {
            return RationalSeries::monomial(self.coeff(0), 0, inner.hi());
        };
        assert!(v >= 1, "inner series must have positive valuation");
        let hi = inner.hi().min((self.hi() + 1) * v - 1);
        let mut acc = RationalSeries::monomial(self.coeff(self.hi()), 0, hi);
        for k in (self.lo..self.hi()).rev() {
            acc = acc.mul(inner).add(&RationalSeries::monomial(self.coeff(k), 0, hi));
        }
        acc.truncated(hi)
    }

    /// Exact evaluation at a rational point (partial sum over the window).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        if self.lo >= 0 {
            acc * x.pow(self.lo as i32)
        } else {
            acc / x.pow((-self.lo) as i32)
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (self.lo + i as i64, c))
    }
}

/// `(1 + sign * t^step)^alpha` as a series on `[0, hi]`.
pub fn binomial_series(alpha: &BigRational, sign: i64, step: u64, hi: i64) -> RationalSeries {
    let mut coeffs = vec![BigRational::zero(); (hi + 1) as usize];
    let mut n = 0u64;
    let s = BigRational::from(BigInt::from(sign));
    while (n * step) as i64 <= hi {
        coeffs[(n * step) as usize] = binomial(alpha, n) * s.pow(n as i32);
        n += 1;
    }
    RationalSeries::new(0, coeffs)
}

/// Taylor coefficients of the odd cubic sine analogue: the unique solution
/// of `f''' = 6 f^4 - 4 f` with `f = t + O(t^4)`, supported on exponents
/// `k == 1 (mod 3)`.
pub fn sl_series(order: usize) -> RationalSeries {
    let n = order;
    let mut c = vec![BigRational::zero(); n + 1];
    if n >= 1 {
        c[1] = BigRational::one();
    }
    // sl2/sl4: coefficients of f^2 and f^4, extended as c becomes known.
    let mut sl2 = vec![BigRational::zero(); n + 1];
    let mut sl4 = vec![BigRational::zero(); n + 1];
    let mut done2 = 1usize; // sl2[..=done2] is final (needs c[..done2])
    let mut done4 = 3usize;
    for k in 4..=n {
        // finalize sl2 up to k-5 and sl4 up to k-3
        while done2 + 1 <= n.min(k.saturating_sub(5)) {
            let j = done2 + 1;
            let mut s = BigRational::zero();
            for i in 1..j {
                if !c[i].is_zero() && !c[j - i].is_zero() {
                    s += &c[i] * &c[j - i];
                }
            }
            sl2[j] = s;
            done2 = j;
        }
        while done4 + 1 <= n.min(k.saturating_sub(3)) {
            let j = done4 + 1;
            let mut s = BigRational::zero();
            for i in 2..=(j - 2) {
                if !sl2[i].is_zero() && !sl2[j - i].is_zero() {
                    s += &sl2[i] * &sl2[j - i];
                }
            }
            sl4[j] = s;
            done4 = j;
        }
        if k % 3 != 1 {
            continue;
        }
        let kk = BigInt::from(k as u64);
        let fall = BigRational::from(&kk * (&kk - 1) * (&kk - 2));
        let rhs = BigRational::from(BigInt::from(6)) * &sl4[k - 3]
            - BigRational::from(BigInt::from(4)) * &c[k - 3];
        c[k] = rhs / fall;
    }
    RationalSeries::new(0, c)
}

/// Taylor coefficients of the even companion: `g' = -f^2`, `g(0) = 1`,
/// supported on exponents divisible by 3.
pub fn cl_series(order: usize) -> RationalSeries {
    let sl = sl_series(order);
    let sl2 = sl.mul(&sl).truncated(order as i64);
    let mut g = vec![BigRational::zero(); order + 1];
    g[0] = BigRational::one();
    for k in 1..=order {
        let prev = sl2.coeff(k as i64 - 1);
        g[k] = -prev / BigRational::from(BigInt::from(k as u64));
    }
    RationalSeries::new(0, g)
}

/// Laurent coefficients of the reciprocal `1/f`, computed two independent
/// ways: directly as the series reciprocal, and through the differential
/// equation `h''' = 4h - 6h^4` satisfied by `h = 1/f`. The two derivations
/// must agree exactly.
pub fn sl_inverse_series(order: usize) -> Result<RationalSeries> {
    let via_recip = sl_series(order + 2).recip().truncated(order as i64);
    let via_ode = sl_inverse_by_ode(order);
    if via_recip != via_ode {
        for k in -1..=order as i64 {
            if via_recip.coeff(k) != via_ode.coeff(k) {
                return Err(Error::SeriesMismatch(k.max(0) as usize));
            }
        }
        return Err(Error::SeriesMismatch(0));
    }
    Ok(via_ode)
}

/// Solves `h''' = 4h - 6h^4` for `h = 1/t + sum D_{3n+2} t^{3n+2}`.
///
/// Writing `g = h - 1/t`, matching the coefficient of `t^{3n-1}` gives
/// `[(3n+2)(3n+1)3n + 24] D_{3n+2} = 4 D_{3n-1}
///     - 6 (6 [g^2]_{3n+1} + 4 [g^3]_{3n} + [g^4]_{3n-1})`
/// with the convention `D_{-1} = 1` absorbing the `4/t` term.
fn sl_inverse_by_ode(order: usize) -> RationalSeries {
    let nmax = if order < 2 { 0 } else { (order - 2) / 3 };
    let mut d = vec![BigRational::zero(); nmax + 1]; // d[n] = D_{3n+2}
    // convolution powers of g = sum d[n] t^{3n+2}, indexed by n in t^{3n+c}
    let mut g2 = vec![BigRational::zero(); nmax + 1]; // g^2: t^{3n+4}
    let mut g3 = vec![BigRational::zero(); nmax + 1]; // g^3: t^{3n+6}
    let mut g4 = vec![BigRational::zero(); nmax + 1]; // g^4: t^{3n+8}
    for n in 0..=nmax {
        // finalize convolutions that only involve d[..n]
        if n >= 1 {
            let j = n - 1;
            let mut s = BigRational::zero();
            for i in 0..=j {
                s += &d[i] * &d[j - i];
            }
            g2[j] = s;
            let mut s3 = BigRational::zero();
            for i in 0..=j {
                if !d[i].is_zero() && !g2[j - i].is_zero() {
                    s3 += &d[i] * &g2[j - i];
                }
            }
            g3[j] = s3;
            let mut s4 = BigRational::zero();
            for i in 0..=j {
                if !d[i].is_zero() && !g3[j - i].is_zero() {
                    s4 += &d[i] * &g3[j - i];
                }
            }
            g4[j] = s4;
        }
        // coefficient of t^{3n-1} in h''' = 4h - 6h^4
        let d_prev = if n == 0 {
            BigRational::one() // D_{-1}
        } else {
            d[n - 1].clone()
        };
        // [g^2]_{t^{3n+1}} has n' with 3n'+4 = 3n+1, n' = n-1; similarly for
        // g^3 at t^{3n} (n' = n-2) and g^4 at t^{3n-1} (n' = n-3).
        let c2 = if n >= 1 { g2[n - 1].clone() } else { BigRational::zero() };
        let c3 = if n >= 2 { g3[n - 2].clone() } else { BigRational::zero() };
        let c4 = if n >= 3 { g4[n - 3].clone() } else { BigRational::zero() };
        let kn = BigInt::from(3 * n as u64 + 2);
        let fall = BigRational::from(&kn * (&kn - 1) * (&kn - 2) + BigInt::from(24));
        let six = BigRational::from(BigInt::from(6));
        let rhs = BigRational::from(BigInt::from(4)) * d_prev
            - &six * (&six * c2 + BigRational::from(BigInt::from(4)) * c3 + c4);
        d[n] = rhs / fall;
    }
    let mut coeffs = vec![BigRational::zero(); order as usize + 2];
    coeffs[0] = BigRational::one(); // 1/t
    for (n, dn) in d.iter().enumerate() {
        let k = 3 * n + 2;
        if k as i64 <= order as i64 {
            coeffs[k + 1] = dn.clone();
        }
    }
    RationalSeries::new(-1, coeffs)
}

/// Lattice sums `G_{6n}` for `n = 0..=nmax` (`G_0 = -1` by convention),
/// from the quadratic recurrence
/// `(6n-1)[(6n-2)(6n-3) - 12] G_{6n}
///    = 6 sum_{k=1}^{n-1} (6k-1)(6n-6k-1) G_{6k} G_{6n-6k}`
/// seeded with `G_6 = 27/140`.
pub fn eisenstein_g(nmax: usize) -> Vec<BigRational> {
    let mut g = vec![BigRational::zero(); nmax + 1];
    g[0] = -BigRational::one();
    if nmax >= 1 {
        g[1] = rat(27, 140);
    }
    for n in 2..=nmax {
        let mut s = BigRational::zero();
        for k in 1..n {
            let w = BigInt::from(6 * k as u64 - 1) * BigInt::from(6 * (n - k) as u64 - 1);
            s += BigRational::from(w) * &g[k] * &g[n - k];
        }
        let six_n = BigInt::from(6 * n as u64);
        let lead = (&six_n - 1u32) * ((&six_n - 2u32) * (&six_n - 3u32) - BigInt::from(12));
        g[n] = BigRational::from(BigInt::from(6)) * s / BigRational::from(lead);
    }
    g
}

/// Re-derives the reciprocal-series coefficients from the lattice sums:
/// `D_{6m+2}` through the convolution identity
/// `sum_{k=0}^m D_{6k+2} (6m-6k-1) G_{6m-6k} 3^{6k} = 0` (m >= 1), and
/// `D_{6m-1} = ((-1)^m 3^{3m-1} - 1) / (2 * 3^{6m-1}) * G_{6m}`.
///
/// Returns `(d_even, d_odd)` with `d_even[m] = D_{6m+2}` (seeded with
/// `D_2 = 1/6`) and `d_odd[m] = D_{6m-1}` for `m >= 1`.
pub fn d_from_g(g: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mmax = g.len() - 1;
    let mut even = vec![BigRational::zero(); mmax + 1];
    even[0] = rat(1, 6);
    for m in 1..=mmax {
        let mut s = BigRational::zero();
        for k in 0..m {
            let w = BigInt::from(6 * (m - k) as i64 - 1) * BigInt::from(3).pow(6 * k as u32);
            s += &even[k] * BigRational::from(w) * &g[m - k];
        }
        // k = m term: D_{6m+2} * (-1) * G_0 * 3^{6m} = D_{6m+2} * 3^{6m}
        even[m] = -s / BigRational::from(BigInt::from(3).pow(6 * m as u32));
    }
    let mut odd = vec![BigRational::zero(); mmax + 1];
    for m in 1..=mmax {
        let sign = if m % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        let num = sign * BigInt::from(3).pow(3 * m as u32 - 1) - BigInt::one();
        let den = BigInt::from(2) * BigInt::from(3).pow(6 * m as u32 - 1);
        odd[m] = BigRational::new(num, den) * &g[m];
    }
    (even, odd)
}

/// Taylor coefficients of the inverse function (the arc length integrand
/// expansion): `sum (-1)^n binom(-2/3, n) t^{3n+1} / (3n+1)`.
pub fn arcsl_series(order: usize) -> RationalSeries {
    let mut coeffs = vec![BigRational::zero(); order + 1];
    let alpha = rat(-2, 3);
    let mut n = 0u64;
    while (3 * n + 1) as usize <= order {
        let k = (3 * n + 1) as usize;
        let sign = if n % 2 == 0 { BigRational::one() } else { -BigRational::one() };
        coeffs[k] = sign * binomial(&alpha, n) / BigRational::from(BigInt::from(k as u64));
        n += 1;
    }
    RationalSeries::new(0, coeffs)
}

/// `(1 - s^3)^{1/3}` composed with a series `s` of valuation 1: the even
/// companion expressed through the odd one.
fn cl_of(s: &RationalSeries) -> RationalSeries {
    let hi = s.hi();
    let outer = binomial_series(&rat(1, 3), -1, 1, hi / 3 + 1);
    let cube = s.pow(3).truncated(hi);
    outer.compose(&cube).truncated(hi)
}

/// Multiple-angle series: the expansion of `f(r u)` in `t = f(u)`, built by
/// iterating the algebraic addition formula
/// `f(u + v) = (f(u)^2 g(v) - f(v)^2 g(u)) / (f(u) g(v)^2 - f(v) g(u)^2)`
/// with `g = (1 - f^3)^{1/3}`. The doubled case, where the quotient
/// degenerates, uses the tangent form
/// `f(2u) = f (1 + g^3) / (g (1 + f^3))`.
pub fn sl_multiple_series(r: i64, order: usize) -> RationalSeries {
    // padding absorbs the window shrink of each division
    let pad = order as i64 + 3 * r.unsigned_abs() as i64 + 9;
    let s = sl_multiple_padded(r.unsigned_abs(), pad);
    let s = if r < 0 {
        // f(-v) = -f(v)/g(v)
        s.neg().div(&cl_of(&s))
    } else {
        s
    };
    s.truncated(order as i64)
}

fn sl_multiple_padded(r: u64, hi: i64) -> RationalSeries {
    let t = RationalSeries::monomial(BigRational::one(), 1, hi);
    match r {
        0 => RationalSeries::zero(0, hi),
        1 => t,
        2 => {
            let g = cl_of(&t);
            let one = RationalSeries::monomial(BigRational::one(), 0, hi);
            let num = t.mul(&one.add(&g.pow(3)));
            let den = g.mul(&one.add(&t.pow(3)));
            num.div(&den).truncated(hi - 4)
        }
        _ => {
            let prev = sl_multiple_padded(r - 1, hi);
            let g_prev = cl_of(&prev);
            let g_t = cl_of(&t);
            let num = prev.pow(2).mul(&g_t).sub(&t.pow(2).mul(&g_prev));
            let den = prev.mul(&g_t.pow(2)).sub(&t.mul(&g_prev.pow(2)));
            num.div(&den)
        }
    }
}

/// Laurent expansion of `1/f(ru)` in `t`; `r = 0` is rejected.
pub fn sl_multiple_inverse_series(r: i64, order: usize) -> Result<RationalSeries> {
    if r == 0 {
        return Err(Error::ZeroMultiplier);
    }
    Ok(sl_multiple_series(r, order + 2).recip().truncated(order as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_arithmetic() {
        // (1 + t) * (1 - t + t^2 - ...) = 1 exactly within the window
        let a = RationalSeries::new(0, vec![BigRational::one(), BigRational::one()]);
        let inv = a.recip();
        assert_eq!(inv.lo(), 0);
        assert_eq!(inv.coeff(0), BigRational::one());
        assert_eq!(inv.coeff(1), rat(-1, 1));
        // Laurent reciprocal: 1/(t + t^2) = 1/t - 1 + t - ...
        let b = RationalSeries::new(1, vec![BigRational::one(), BigRational::one()]);
        let binv = b.recip();
        assert_eq!(binv.lo(), -1);
        assert_eq!(binv.coeff(-1), BigRational::one());
        assert_eq!(binv.coeff(0), rat(-1, 1));
    }

    #[test]
    fn product_window_is_conservative() {
        // unknown tails must shrink the product window:
        // hi = min(a.hi + b.lo, b.hi + a.lo) = min(6, 4) here
        let a = RationalSeries::new(0, vec![BigRational::one(); 5]); // [0,4]
        let b = RationalSeries::new(2, vec![BigRational::one(); 3]); // [2,4]
        let p = a.mul(&b);
        assert_eq!(p.lo(), 2);
        assert_eq!(p.hi(), 4);
    }

    #[test]
    fn sl_first_coefficients() {
        let sl = sl_series(16);
        assert_eq!(sl.coeff(1), BigRational::one());
        assert_eq!(sl.coeff(4), rat(-1, 6));
        assert_eq!(sl.coeff(7), rat(2, 63));
        assert_eq!(sl.coeff(10), rat(-13, 2268));
        for k in [0i64, 2, 3, 5, 6, 8, 9] {
            assert!(sl.coeff(k).is_zero(), "support must be 1 mod 3");
        }
        // k! * coefficient is integral
        for (k, c) in sl.iter() {
            let scaled = c * BigRational::from(factorial(k as u64));
            assert!(scaled.is_integer(), "c_{k} not integral");
        }
    }

    #[test]
    fn cl_first_coefficients() {
        let cl = cl_series(9);
        assert_eq!(cl.coeff(0), BigRational::one());
        assert_eq!(cl.coeff(3), rat(-1, 3));
        assert_eq!(cl.coeff(6), rat(1, 18));
        // derivative identity: Sl' = Cl^2
        let sl = sl_series(10);
        let lhs = sl.derivative();
        let rhs = cl.mul(&cl);
        for k in 0..=8i64 {
            assert_eq!(lhs.coeff(k), rhs.coeff(k), "Sl' vs Cl^2 at t^{k}");
        }
        // Sl^3 + Cl^3 = 1
        let cube_sum = sl_series(9).pow(3).add(&cl.pow(3)).truncated(9);
        for (k, c) in cube_sum.iter() {
            if k == 0 {
                assert_eq!(c.clone(), BigRational::one());
            } else {
                assert!(c.is_zero(), "Sl^3 + Cl^3 deviates at t^{k}");
            }
        }
    }

    #[test]
    fn reciprocal_series_two_routes() {
        let inv = sl_inverse_series(20).unwrap();
        assert_eq!(inv.coeff(-1), BigRational::one());
        assert_eq!(inv.coeff(2), rat(1, 6));
        assert_eq!(inv.coeff(5), rat(-1, 252));
        assert_eq!(inv.coeff(8), rat(-1, 4536));
        for (k, c) in inv.iter() {
            if k >= 0 && k % 3 != 2 {
                assert!(c.is_zero(), "unexpected support at {k}");
            }
        }
    }

    #[test]
    fn lattice_sum_recurrence() {
        // G_18 and G_24 double-checked against the numeric lattice sums
        // sum' w^{-k} over the hexagonal period lattice (45 digits)
        let g = eisenstein_g(4);
        assert_eq!(g[1], rat(27, 140));
        assert_eq!(g[2], rat(729, 112112));
        assert_eq!(g[3], rat(19683, 92176448));
        assert_eq!(g[4], rat(1594323, 226970947840));
    }

    #[test]
    fn reciprocal_matches_lattice_sums() {
        let g = eisenstein_g(4);
        let (even, odd) = d_from_g(&g);
        let inv = sl_inverse_series(26).unwrap();
        for m in 0..=4usize {
            let k = 6 * m as i64 + 2;
            if k <= 26 {
                assert_eq!(even[m], inv.coeff(k), "D_{k} from convolution");
            }
        }
        for m in 1..=4usize {
            let k = 6 * m as i64 - 1;
            if k <= 26 {
                assert_eq!(odd[m], inv.coeff(k), "D_{k} from closed form");
            }
        }
    }

    #[test]
    fn arcsl_inverts_sl() {
        let n = 40usize;
        let inv = arcsl_series(n);
        assert_eq!(inv.coeff(1), BigRational::one());
        assert_eq!(inv.coeff(4), rat(1, 6));
        let sl = sl_series(n);
        let comp = inv.compose(&sl);
        for (k, c) in comp.iter() {
            if k == 1 {
                assert_eq!(c.clone(), BigRational::one());
            } else {
                assert!(c.is_zero(), "composition deviates at t^{k}");
            }
        }
    }

    #[test]
    fn multiple_angle_series() {
        // f(2u) = 2t - (7/3) t^4 + ...
        let s2 = sl_multiple_series(2, 10);
        assert_eq!(s2.coeff(1), rat(2, 1));
        assert_eq!(s2.coeff(4), rat(-7, 3));
        // f(-u) = -t - t^4/3 - ...
        let sm1 = sl_multiple_series(-1, 7);
        assert_eq!(sm1.coeff(1), rat(-1, 1));
        assert_eq!(sm1.coeff(4), rat(-1, 3));
        assert_eq!(sm1.coeff(7), rat(-2, 9));
        // multiplicativity through the arc inverse: f(ru) as a function of
        // u has Taylor coefficients C_k r^k; compose with arcsl to compare.
        let order = 22usize;
        for r in [2i64, 3, -2] {
            let via_add = sl_multiple_series(r, order);
            let sl = sl_series(order);
            let arc = arcsl_series(order);
            // sl(r * arcsl(t))
            let scaled_arc = arc.scale(&BigRational::from(BigInt::from(r)));
            let direct = sl.compose(&scaled_arc);
            for k in 1..=direct.hi().min(via_add.hi()) {
                assert_eq!(via_add.coeff(k), direct.coeff(k), "r = {r}, t^{k}");
            }
        }
        assert!(matches!(
            sl_multiple_inverse_series(0, 10),
            Err(Error::ZeroMultiplier)
        ));
    }

    #[test]
    fn multiple_angle_membership() {
        // f(ru) - r t lies in t^4 Z[1/3][[t^3]]
        for r in [-5i64, -3, -2, -1, 2, 3, 4, 5] {
            let s = sl_multiple_series(r, 40);
            assert_eq!(s.coeff(1), BigRational::from(BigInt::from(r)));
            for (k, c) in s.iter() {
                if c.is_zero() {
                    continue;
                }
                assert_eq!(k % 3, 1, "support at {k} for r = {r}");
                let mut den = c.denom().clone();
                while (&den % BigInt::from(3)).is_zero() {
                    den /= BigInt::from(3);
                }
                assert_eq!(den, BigInt::one(),
                    "denominator {} at t^{k} escapes Z[1/3] for r = {r}", c.denom());
            }
        }
        // 1/f(ru) - 1/(rt) lies in t^2 Z[1/r, 1/3][[t^3]]
        for r in [2i64, 3, 4, 5, -2, -5] {
            let inv = sl_multiple_inverse_series(r, 38).unwrap();
            assert_eq!(inv.coeff(-1), rat(1, r));
            let mut allowed = vec![3u64];
            let mut m = r.unsigned_abs();
            let mut f = 2u64;
            while f * f <= m {
                if m % f == 0 {
                    allowed.push(f);
                    while m % f == 0 {
                        m /= f;
                    }
                }
                f += 1;
            }
            if m > 1 {
                allowed.push(m);
            }
            for (k, c) in inv.iter() {
                if c.is_zero() || k == -1 {
                    continue;
                }
                assert!(k >= 2 && k % 3 == 2, "support at {k} for r = {r}");
                let mut den = c.denom().clone();
                for p in &allowed {
                    let pb = BigInt::from(*p);
                    while (&den % &pb).is_zero() {
                        den /= &pb;
                    }
                }
                assert_eq!(den, BigInt::one(),
                    "denominator {} at t^{k} escapes Z[1/r,1/3] for r = {r}", c.denom());
            }
        }
    }
}
