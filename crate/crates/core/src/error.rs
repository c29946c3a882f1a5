/// Crate-wide error type. Variants are grouped by the layer that raises
/// them; everything is cheap to clone so reports can carry errors verbatim.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The rational prime does not split in `Z[rho]` (or is not prime).
    #[error("{0} is not a prime congruent to 1 mod 3")]
    NotSplit(u64),
    /// An input to the reciprocity or symbol routines is not a primary prime.
    #[error("{0} is not a primary prime of Z[rho]")]
    NotPrimary(String),
    /// A power residue landed outside the expected cube roots of unity.
    #[error("cubic power residue matched no cube root of unity mod {0}")]
    InternalInconsistency(u64),
    /// Two independent derivations of the same coefficient disagree.
    #[error("cross-derivation mismatch at index {0}")]
    SeriesMismatch(usize),
    /// `sl_multiple` was asked for the reciprocal branch at r = 0.
    #[error("multiplier must be nonzero")]
    ZeroMultiplier,
    /// The argument reduces into the period lattice, where the functions pole.
    #[error("argument reduces into the period lattice")]
    LatticePoint,
    /// A denominator underflowed the precision budget.
    #[error("denominator of {0} underflows the working precision")]
    PoleHit(&'static str),
    /// No stable result was reached within the precision ceiling.
    #[error("no stable result within the {0}-bit precision ceiling")]
    PrecisionExhausted(u32),
    /// The prime falls in the residue class the construction excludes.
    #[error("residue class {0} mod 9 is outside the supported cases")]
    UnsupportedResidueClass(u64),
    /// A rounded quantity violates its exact unit-times-(1 mod 3) form.
    #[error("membership violation: {0}")]
    MembershipViolation(String),
    /// A coefficient residue is undefined because the denominator vanishes.
    #[error("coefficient denominator divisible by {0}")]
    DenominatorDivisible(u64),
    /// A point count or local factor was requested at a bad prime.
    #[error("reduction at a prime dividing the discriminant")]
    BadReduction,
    /// The reduction algorithm ran past the implemented steps.
    #[error("reduction type beyond the implemented steps")]
    UnsupportedStep,
    /// Miscellaneous input validation.
    #[error("{0}")]
    Invalid(String),
}
