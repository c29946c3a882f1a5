//! Exact and high-precision arithmetic around the Eisenstein lattice:
//! cubic residue characters, division-value Gauss sums for the CM curves
//! `y^2 + lambda*y = x^3`, the rational coefficient tables attached to the
//! cubic analogue of the lemniscate sine, and the congruences tying the
//! two sides together.
//!
//! The crate is organized bottom-up:
//!
//! * [`eisenstein`]: the ring `Z[rho]`, primary primes, residue
//!   isomorphisms, cubic characters, and the Hecke character built on them.
//! * [`series`]: exact rational power/Laurent series arithmetic.
//! * [`bh`]: the coefficient tables (`c`, `d`, `e`, `G`, `BH`) produced by
//!   the series recurrences, their cross-derivations, and the integrality
//!   and sign checks they satisfy.
//! * [`hp`]: fixed-point big-float reals/complexes and the transcendental
//!   constants of the lattice (`pi`, `Gamma(1/3)`, the real period).
//! * [`analytic`]: Weierstrass values on the hexagonal lattice, the
//!   division-value sums, and the normalized sum `alpha`.
//! * [`congruence`]: residues of table coefficients and the checks that
//!   `alpha` matches them modulo `ell`.
//! * [`curves`] / [`tate`]: point counts over residue fields, Jacobi sum
//!   oracles, and local reduction data.
//! * [`lseries`]: Euler factor comparisons, the value at `s = 1`, and the
//!   order prediction for the Tate-Shafarevich group.
//! * [`pipeline`]: the per-prime verification record used by the CLI and
//!   the acceptance suite.

pub mod analytic;
pub mod bh;
pub mod congruence;
pub mod curves;
pub mod eisenstein;
pub mod hp;
pub mod lseries;
pub mod pipeline;
pub mod series;
pub mod tate;

mod error;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Serializers rendering exact values as decimal strings.
pub mod ser {
    use num_bigint::BigInt;
    use num_rational::BigRational;

    pub fn bigint<S: serde::Serializer>(
        x: &BigInt,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn ratio<S: serde::Serializer>(
        x: &BigRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_string(x))
    }

    /// Integral rationals render as plain integers, everything else as
    /// `numerator/denominator`.
    pub fn ratio_string(x: &BigRational) -> String {
        use num_traits::One;
        if x.denom().is_one() {
            x.numer().to_string()
        } else {
            format!("{}/{}", x.numer(), x.denom())
        }
    }
}
