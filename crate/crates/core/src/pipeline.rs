//! Per-prime verification: one record aggregating the rounded coefficient,
//! both congruences, local reduction data, Euler-factor agreement, and the
//! order prediction with its congruence, plus a parallel sweep over primes.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::alpha_with_ladder;
use crate::congruence::{check_congruences, CongruenceReport};
use crate::eisenstein::{primes_up_to, split_prime, EisensteinInt};
use crate::lseries::{
    check_lfactor_correspondence, check_sha_congruence, sha_prediction, LFactorReport,
    ShaCongruence, ShaPrediction,
};
use crate::tate::{tate_local, tate_local_closed_form, BadPlace, LocalReduction};
use crate::{Error, Result};

#[derive(Clone, Copy)]
pub struct PipelineOptions {
    pub start_bits: u32,
    pub max_bits: u32,
    pub lfactor_norm_bound: u64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { start_bits: 128, max_bits: 1024, lfactor_norm_bound: 100 }
    }
}

/// Everything verified for one primary prime.
#[derive(Clone, Serialize)]
pub struct PrimeRecord {
    pub ell: u64,
    pub class_mod_9: u64,
    pub lambda: EisensteinInt,
    pub alpha: EisensteinInt,
    pub alpha_bits: u32,
    pub congruence: CongruenceReport,
    pub reduction_curve_prime: LocalReduction,
    pub reduction_ramified: LocalReduction,
    pub reduction_matches_closed_form: bool,
    pub lfactors: LFactorReport,
    pub sha: ShaPrediction,
    pub sha_congruence: ShaCongruence,
    pub passes: bool,
}

pub fn verify_prime(ell: u64, opts: &PipelineOptions) -> Result<PrimeRecord> {
    let curve = split_prime(ell)?;
    let class = curve.residue_class_mod_9();
    if class != 4 && class != 7 {
        return Err(Error::UnsupportedResidueClass(class));
    }
    let a = alpha_with_ladder(&curve, opts.start_bits, opts.max_bits)?;
    let congruence = check_congruences(&curve, &a.value)?;
    let reduction_curve_prime = tate_local(&curve, BadPlace::CurvePrime)?;
    let reduction_ramified = tate_local(&curve, BadPlace::Ramified)?;
    let reduction_matches_closed_form = reduction_curve_prime
        == tate_local_closed_form(&curve, BadPlace::CurvePrime)
        && reduction_ramified == tate_local_closed_form(&curve, BadPlace::Ramified);
    let lfactors = check_lfactor_correspondence(&curve, opts.lfactor_norm_bound)?;
    let sha = sha_prediction(&curve, &a.value)?;
    let sha_congruence = check_sha_congruence(&curve, &sha)?;
    let passes = congruence.all_pass()
        && reduction_matches_closed_form
        && lfactors.all_match
        && sha.stripped_is_square
        && sha_congruence.matches;
    Ok(PrimeRecord {
        ell,
        class_mod_9: class,
        lambda: curve.lambda().clone(),
        alpha: a.value,
        alpha_bits: a.bits,
        congruence,
        reduction_curve_prime,
        reduction_ramified,
        reduction_matches_closed_form,
        lfactors,
        sha,
        sha_congruence,
        passes,
    })
}

/// Runs the pipeline on every split prime up to `lmax`, in parallel, in
/// ascending order; excluded residue classes surface as their error.
pub fn sweep(lmax: u64, opts: &PipelineOptions) -> Vec<(u64, Result<PrimeRecord>)> {
    let primes: Vec<u64> = primes_up_to(lmax).into_iter().filter(|p| p % 3 == 1).collect();
    primes
        .par_iter()
        .map(|&ell| (ell, verify_prime(ell, opts)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn worked_primes_pass_end_to_end() {
        let opts = PipelineOptions::default();
        for ell in [7u64, 13] {
            let record = verify_prime(ell, &opts).unwrap();
            assert!(record.passes, "norm {ell}");
            assert!(record.sha.order.is_one());
        }
    }

    #[test]
    fn excluded_class_is_reported() {
        let opts = PipelineOptions::default();
        match verify_prime(19, &opts) {
            Err(Error::UnsupportedResidueClass(1)) => {}
            Err(e) => panic!("unexpected error: {e}"),
            Ok(_) => panic!("expected the excluded class"),
        }
    }

    #[test]
    fn small_sweep_is_ordered_and_passes() {
        let opts = PipelineOptions::default();
        let results = sweep(45, &opts);
        let ells: Vec<u64> = results.iter().map(|(ell, _)| *ell).collect();
        assert_eq!(ells, vec![7, 13, 19, 31, 37, 43]);
        for (ell, res) in results {
            match res {
                Ok(record) => assert!(record.passes, "norm {ell}"),
                Err(Error::UnsupportedResidueClass(1)) => {
                    assert_eq!(ell % 9, 1, "norm {ell}");
                }
                Err(e) => panic!("norm {ell}: {e}"),
            }
        }
    }
}
