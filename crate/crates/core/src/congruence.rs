//! Residue congruences connecting the rounded Gauss-sum coefficient of a
//! primary prime with scaled series coefficients: once through the residue
//! isomorphism, and once between absolute-value squares.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bh::BhTable;
use crate::eisenstein::{mod_inverse, mul_mod, pow_mod, residue_iso, EisensteinInt, PrimaryPrime};
use crate::{Error, Result};

/// Reduces an exact rational modulo an odd prime, failing if the prime
/// divides the denominator.
pub fn rational_mod(r: &BigRational, ell: u64) -> Result<u64> {
    let big_ell = BigInt::from(ell);
    let den = r.denom().mod_floor(&big_ell);
    if den.is_zero() {
        return Err(Error::DenominatorDivisible(ell));
    }
    let num = r.numer().mod_floor(&big_ell);
    let num_u: u64 = num.try_into().expect("reduced residue fits");
    let den_u: u64 = den.try_into().expect("reduced residue fits");
    let inv = mod_inverse(den_u, ell).expect("denominator invertible modulo a prime");
    Ok(mul_mod(num_u, inv, ell))
}

/// The scaled series coefficient predicted to match the Gauss-sum
/// coefficient modulo the prime: `-(1/3) C_{2(l-1)/3}` in the class-7 case
/// and `-(1/3) D_{2(l-1)/3}` in the class-4 case.
pub fn bh_residue(p: &PrimaryPrime) -> Result<u64> {
    let ell = p.ell();
    let k = 2 * (ell - 1) / 3;
    let table = BhTable::shared(k as usize + 2)?;
    let coeff = match p.residue_class_mod_9() {
        7 => table.big_c(k as usize),
        4 => table.big_d(k as i64),
        _ => return Err(Error::UnsupportedResidueClass(ell)),
    };
    let scaled = -coeff / BigRational::from(BigInt::from(3));
    rational_mod(&scaled, ell)
}

/// The exponent pairing the norm of the coefficient with the square of a
/// power of three times the series coefficient.
fn norm_side_exponent(p: &PrimaryPrime) -> u64 {
    let ell = p.ell();
    if p.residue_class_mod_9() == 7 {
        (ell - 7) / 6
    } else {
        (ell - 4) / 3
    }
}

/// Outcome of both congruence checks for one prime.
#[derive(Clone, Serialize)]
pub struct CongruenceReport {
    pub ell: u64,
    pub class_mod_9: u64,
    pub bh_residue: u64,
    pub alpha_residue: u64,
    pub residue_matches: bool,
    pub norm_residue: u64,
    pub scaled_square_residue: u64,
    pub norm_matches: bool,
}

impl CongruenceReport {
    pub fn all_pass(&self) -> bool {
        self.residue_matches && self.norm_matches
    }
}

pub fn check_congruences(p: &PrimaryPrime, alpha: &EisensteinInt) -> Result<CongruenceReport> {
    let ell = p.ell();
    let class = p.residue_class_mod_9();
    let bh = bh_residue(p)?;
    let alpha_residue = residue_iso(alpha, p);
    let norm = alpha.norm().mod_floor(&BigInt::from(ell));
    let norm_residue: u64 = norm.try_into().expect("norm residue fits");
    let k = 2 * (ell - 1) / 3;
    let table = BhTable::shared(k as usize + 2)?;
    let coeff = match class {
        7 => table.big_c(k as usize),
        4 => table.big_d(k as i64),
        _ => return Err(Error::UnsupportedResidueClass(ell)),
    };
    let base = mul_mod(
        pow_mod(3, norm_side_exponent(p), ell),
        rational_mod(&coeff.abs(), ell)?,
        ell,
    );
    let scaled_square_residue = mul_mod(base, base, ell);
    Ok(CongruenceReport {
        ell,
        class_mod_9: class,
        bh_residue: bh,
        alpha_residue,
        residue_matches: alpha_residue == bh,
        norm_residue,
        scaled_square_residue,
        norm_matches: norm_residue == scaled_square_residue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic;
    use crate::eisenstein::split_prime;
    use crate::series::rat;

    #[test]
    fn scaled_coefficients_first_two_primes() {
        assert_eq!(bh_residue(&split_prime(7).unwrap()).unwrap(), 2);
        assert_eq!(bh_residue(&split_prime(13).unwrap()).unwrap(), 4);
    }

    #[test]
    fn worked_reports() {
        let p7 = split_prime(7).unwrap();
        let r7 = check_congruences(&p7, &EisensteinInt::rho()).unwrap();
        assert!(r7.all_pass());
        assert_eq!(r7.alpha_residue, 2);
        let p13 = split_prime(13).unwrap();
        let r13 = check_congruences(&p13, &EisensteinInt::new(1, 1)).unwrap();
        assert!(r13.all_pass());
        assert_eq!(r13.alpha_residue, 4);
        assert_eq!(r13.norm_residue, 1);
    }

    #[test]
    fn computed_coefficient_satisfies_congruences() {
        for ell in [31u64, 43, 61] {
            let p = split_prime(ell).unwrap();
            let a = analytic::alpha(&p).unwrap();
            let report = check_congruences(&p, &a.value).unwrap();
            assert!(report.all_pass(), "congruence failed for {ell}");
        }
    }

    #[test]
    fn rational_reduction_guards_denominator() {
        assert!(matches!(
            rational_mod(&rat(1, 7), 7),
            Err(Error::DenominatorDivisible(7))
        ));
        assert_eq!(rational_mod(&rat(-5, 4), 7).unwrap(), 4);
    }
}
