//! Python bindings for the eisgauss workbench.
//!
//! A `PrimaryPrime` class carries the per-prime operations and free
//! functions expose the coefficient tables and the sweep. Structured
//! results cross the boundary as dicts and lists built from the same
//! serialization the CLI emits, so field names match the JSON output.

use num_traits::ToPrimitive;
use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::{json, Map, Value};

use eisgauss::analytic::{alpha_with_ladder, gauss_data, WpContext};
use eisgauss::bh::BhTable;
use eisgauss::congruence::{bh_residue as residue_of_bh, check_congruences};
use eisgauss::curves::{
    count_points_inert, count_points_inert_formula, count_points_split,
    count_points_split_formula, torsion_order,
};
use eisgauss::eisenstein::{
    is_prime_u64, residue_iso, split_prime, EisensteinInt, PrimaryPrime as Prime,
};
use eisgauss::lseries::{check_sha_congruence, lfactor_records, sha_prediction};
use eisgauss::pipeline::{sweep as run_sweep, verify_prime, PipelineOptions, PrimeRecord};
use eisgauss::ser::ratio_string;
use eisgauss::tate::{tate_local, tate_local_closed_form, BadPlace};
use eisgauss::Error;

fn map_err(e: Error) -> PyErr {
    match e {
        Error::NotSplit(_)
        | Error::NotPrimary(_)
        | Error::UnsupportedResidueClass(_)
        | Error::ZeroMultiplier
        | Error::BadReduction
        | Error::Invalid(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else {
                n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, val) in map {
                dict.set_item(k, json_to_py(py, val)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let v = serde_json::to_value(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    json_to_py(py, &v)
}

fn pair(z: &EisensteinInt) -> PyResult<(i64, i64)> {
    let overflow = || PyOverflowError::new_err("component exceeds i64");
    Ok((
        z.a.to_i64().ok_or_else(overflow)?,
        z.b.to_i64().ok_or_else(overflow)?,
    ))
}

fn record_value(ell: u64, outcome: Result<PrimeRecord, Error>) -> Value {
    match outcome {
        Ok(record) => serde_json::to_value(&record).expect("record serializes"),
        Err(Error::UnsupportedResidueClass(_)) => {
            json!({ "ell": ell, "skipped": "excluded residue class" })
        }
        Err(e) => json!({ "ell": ell, "error": e.to_string() }),
    }
}

/// A rational prime congruent to 1 mod 3 together with its primary
/// generator, exposing the verification chain one stage at a time.
#[pyclass(frozen)]
struct PrimaryPrime {
    inner: Prime,
}

#[pymethods]
impl PrimaryPrime {
    #[new]
    fn new(ell: u64) -> PyResult<Self> {
        let inner = split_prime(ell).map_err(map_err)?;
        Ok(PrimaryPrime { inner })
    }

    #[getter]
    fn ell(&self) -> u64 {
        self.inner.ell()
    }

    #[getter]
    fn generator(&self) -> PyResult<(i64, i64)> {
        pair(self.inner.lambda())
    }

    #[getter]
    fn m(&self) -> PyResult<i64> {
        self.inner
            .m()
            .to_i64()
            .ok_or_else(|| PyOverflowError::new_err("m exceeds i64"))
    }

    #[getter]
    fn n(&self) -> PyResult<i64> {
        self.inner
            .n()
            .to_i64()
            .ok_or_else(|| PyOverflowError::new_err("n exceeds i64"))
    }

    #[getter]
    fn rho_image(&self) -> u64 {
        self.inner.rho_image()
    }

    #[getter]
    fn class_mod_9(&self) -> u64 {
        self.inner.residue_class_mod_9()
    }

    fn __repr__(&self) -> String {
        let lambda = self.inner.lambda();
        format!(
            "PrimaryPrime(ell={}, lambda={}{:+}*rho)",
            self.inner.ell(),
            lambda.a,
            lambda.b
        )
    }

    /// Rounded normalized Gauss-sum coefficient as an `(a, b)` pair
    /// meaning `a + b*rho`.
    #[pyo3(signature = (start_bits=128, max_bits=4096))]
    fn alpha(&self, py: Python<'_>, start_bits: u32, max_bits: u32) -> PyResult<(i64, i64)> {
        let alpha = py
            .detach(|| alpha_with_ladder(&self.inner, start_bits, max_bits))
            .map_err(map_err)?;
        pair(&alpha.value)
    }

    /// Gauss sum, cube root, and raw coefficient at the given precision,
    /// as lossless hex dumps.
    #[pyo3(signature = (bits=128))]
    fn gauss<'py>(&self, py: Python<'py>, bits: u32) -> PyResult<Bound<'py, PyAny>> {
        let data = py
            .detach(|| gauss_data(&self.inner, bits))
            .map_err(map_err)?;
        let (gs_re, gs_im) = data.gauss_sum.to_hex();
        let (lt_re, lt_im) = data.lambda_tilde.to_hex();
        let (ar_re, ar_im) = data.alpha_raw.to_hex();
        let v = json!({
            "ell": self.inner.ell(),
            "bits": data.bits,
            "gauss_sum": { "re": gs_re, "im": gs_im },
            "lambda_tilde": { "re": lt_re, "im": lt_im },
            "alpha_raw": { "re": ar_re, "im": ar_im },
        });
        json_to_py(py, &v)
    }

    /// Residue and norm congruence checks for the rounded coefficient.
    #[pyo3(signature = (start_bits=128, max_bits=4096))]
    fn congruences<'py>(
        &self,
        py: Python<'py>,
        start_bits: u32,
        max_bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let report = py
            .detach(|| {
                let alpha = alpha_with_ladder(&self.inner, start_bits, max_bits)?;
                check_congruences(&self.inner, &alpha.value)
            })
            .map_err(map_err)?;
        to_py(py, &report)
    }

    /// Reduction data at both bad places, with the closed-form cross-check.
    fn local_reduction<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let curve_prime = tate_local(&self.inner, BadPlace::CurvePrime).map_err(map_err)?;
        let ramified = tate_local(&self.inner, BadPlace::Ramified).map_err(map_err)?;
        let matches = curve_prime == tate_local_closed_form(&self.inner, BadPlace::CurvePrime)
            && ramified == tate_local_closed_form(&self.inner, BadPlace::Ramified);
        let v = json!({
            "ell": self.inner.ell(),
            "curve_prime": curve_prime,
            "ramified": ramified,
            "matches_closed_form": matches,
        });
        json_to_py(py, &v)
    }

    /// Torsion order of the curve over the CM field.
    fn torsion(&self) -> PyResult<u64> {
        torsion_order(&self.inner).map_err(map_err)
    }

    /// Point counts over the residue fields above `p`, brute force
    /// against the character formula.
    fn count_points<'py>(&self, py: Python<'py>, p: u64) -> PyResult<Bound<'py, PyAny>> {
        if !is_prime_u64(p) {
            return Err(PyValueError::new_err(format!("{p} is not prime")));
        }
        if p == 3 {
            return Err(map_err(Error::BadReduction));
        }
        let records = if p % 3 == 1 {
            let place = split_prime(p).map_err(map_err)?;
            let mut out = Vec::new();
            for pl in [place.clone(), place.conjugate()] {
                if residue_iso(self.inner.lambda(), &pl) == 0 {
                    out.push(json!({
                        "norm": p,
                        "degree": 1,
                        "generator": pl.lambda(),
                        "bad_reduction": true,
                    }));
                    continue;
                }
                let brute = count_points_split(&self.inner, &pl).map_err(map_err)?;
                let formula = count_points_split_formula(&self.inner, &pl).map_err(map_err)?;
                out.push(json!({
                    "norm": p,
                    "degree": 1,
                    "generator": pl.lambda(),
                    "brute": brute,
                    "formula": formula,
                    "matches": brute == formula,
                }));
            }
            out
        } else {
            let brute = count_points_inert(&self.inner, p).map_err(map_err)?;
            let formula = count_points_inert_formula(&self.inner, p).map_err(map_err)?;
            vec![json!({
                "norm": p * p,
                "degree": 2,
                "generator": EisensteinInt::new(-(p as i64), 0),
                "brute": brute,
                "formula": formula,
                "matches": brute == formula,
            })]
        };
        json_to_py(py, &Value::Array(records))
    }

    /// Euler factors from the Hecke values against point counts, one
    /// record per good place of norm up to the bound.
    #[pyo3(signature = (norm_bound=120))]
    fn euler_factors<'py>(&self, py: Python<'py>, norm_bound: u64) -> PyResult<Bound<'py, PyAny>> {
        let records = py
            .detach(|| lfactor_records(&self.inner, norm_bound))
            .map_err(map_err)?;
        to_py(py, &records)
    }

    /// Predicted group order from the coefficient and local data, with
    /// the quotient congruence check.
    #[pyo3(signature = (start_bits=128, max_bits=4096))]
    fn sha<'py>(
        &self,
        py: Python<'py>,
        start_bits: u32,
        max_bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let (prediction, congruence) = py
            .detach(|| {
                let alpha = alpha_with_ladder(&self.inner, start_bits, max_bits)?;
                let prediction = sha_prediction(&self.inner, &alpha.value)?;
                let congruence = check_sha_congruence(&self.inner, &prediction)?;
                Ok::<_, Error>((prediction, congruence))
            })
            .map_err(map_err)?;
        let v = json!({
            "ell": self.inner.ell(),
            "predicted_sha": ratio_string(&prediction.order),
            "prediction": prediction,
            "congruence": congruence,
        });
        json_to_py(py, &v)
    }

    /// Full verification record for this prime, as the sweep produces.
    #[pyo3(signature = (start_bits=128, max_bits=1024, norm_bound=100))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        start_bits: u32,
        max_bits: u32,
        norm_bound: u64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let opts = PipelineOptions {
            start_bits,
            max_bits,
            lfactor_norm_bound: norm_bound,
        };
        let record = py
            .detach(|| verify_prime(self.inner.ell(), &opts))
            .map_err(map_err)?;
        to_py(py, &record)
    }
}

/// Coefficient tables as a flat dict of exact decimal and fraction
/// strings, keyed `c_k`, `d_k`, `G_6n`, `BH_6n`.
#[pyfunction]
fn tables(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let table = py.detach(|| BhTable::shared(68)).map_err(map_err)?;
    let mut map = Map::new();
    for k in table.c_indices().filter(|&k| (1..=67).contains(&k)) {
        map.insert(format!("c_{k}"), Value::String(table.little_c(k).to_string()));
    }
    for k in table.d_indices().filter(|&k| (2..=56).contains(&k)) {
        map.insert(
            format!("d_{k}"),
            Value::String(ratio_string(&table.little_d(k as u64))),
        );
    }
    for n in 1..=7 {
        map.insert(
            format!("G_{}", 6 * n),
            Value::String(ratio_string(&table.g(n))),
        );
    }
    for n in 1..=7 {
        map.insert(
            format!("BH_{}", 6 * n),
            Value::String(ratio_string(&table.bh(n))),
        );
    }
    json_to_py(py, &Value::Object(map))
}

/// Residue of the degree-matched Bernoulli-Hurwitz number mod `ell`.
#[pyfunction]
fn bh_residue(py: Python<'_>, ell: u64) -> PyResult<u64> {
    let prime = split_prime(ell).map_err(map_err)?;
    py.detach(|| residue_of_bh(&prime)).map_err(map_err)
}

/// Period constant at the given precision as a lossless hex dump.
#[pyfunction]
#[pyo3(signature = (bits=128))]
fn period_hex(py: Python<'_>, bits: u32) -> PyResult<String> {
    let ctx = py.detach(|| WpContext::get(bits));
    Ok(ctx.constants().varpi.to_hex())
}

/// Verification records for every prime `1 mod 3` up to `lmax`, in
/// order; excluded residue classes appear as skip entries.
#[pyfunction]
#[pyo3(signature = (lmax, start_bits=128, max_bits=1024, norm_bound=100))]
fn sweep(
    py: Python<'_>,
    lmax: u64,
    start_bits: u32,
    max_bits: u32,
    norm_bound: u64,
) -> PyResult<Bound<'_, PyAny>> {
    let opts = PipelineOptions {
        start_bits,
        max_bits,
        lfactor_norm_bound: norm_bound,
    };
    let rows = py.detach(|| run_sweep(lmax, &opts));
    let values: Vec<Value> = rows
        .into_iter()
        .map(|(ell, outcome)| record_value(ell, outcome))
        .collect();
    json_to_py(py, &Value::Array(values))
}

#[pymodule]
fn eisgauss_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PrimaryPrime>()?;
    m.add_function(wrap_pyfunction!(tables, m)?)?;
    m.add_function(wrap_pyfunction!(bh_residue, m)?)?;
    m.add_function(wrap_pyfunction!(period_hex, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
