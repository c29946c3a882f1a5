use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use eisgauss::analytic::{alpha_with_ladder, gauss_data};
use eisgauss::bh::BhTable;
use eisgauss::curves::{
    count_points_inert, count_points_inert_formula, count_points_split,
    count_points_split_formula, torsion_order,
};
use eisgauss::eisenstein::{residue_iso, split_prime, EisensteinInt, PrimaryPrime};
use eisgauss::lseries::{central_value, check_sha_congruence, sha_prediction};
use eisgauss::pipeline::{sweep, PipelineOptions};
use eisgauss::ser::ratio_string;
use eisgauss::tate::{tate_local, BadPlace};
use eisgauss::Error;

#[derive(Parser)]
#[command(
    name = "eisgauss",
    version,
    about = "Coefficient tables, elliptic Gauss sums, curve data, and congruence checks over the Eisenstein lattice"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (tables only; every other command emits JSON)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Working precision in bits, 64 to 4096 (default: EISGAUSS_PREC, then 128)
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Worker threads for the verification sweep
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the exact coefficient tables: c_n, d_n, G_6n, and BH_6n
    Tables,
    /// Run every per-prime check on all split primes up to a bound
    Verify {
        /// Upper bound on the prime norms swept
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(7..))]
        lmax: u64,
    },
    /// Gauss-sum data and the rounded coefficient of one prime
    Gauss {
        /// Norm of the primary prime
        #[arg(long)]
        ell: u64,
    },
    /// Point counts and local reduction data of one curve
    Curve {
        /// Norm of the primary prime cutting out the curve
        #[arg(long)]
        ell: u64,
        /// Compare both counting routes at the places over this prime
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Order prediction and its congruence for one prime
    Sha {
        /// Norm of the primary prime
        #[arg(long)]
        ell: u64,
    },
}

enum RunError {
    Usage(String),
    Check(String),
}

fn usage(e: Error) -> RunError {
    RunError::Usage(e.to_string())
}

fn check(e: Error) -> RunError {
    RunError::Check(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(&cli) {
        Ok((payload, all_pass)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &payload).map_err(|e| e.to_string()),
                None => {
                    print!("{payload}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(String, bool), RunError> {
    let prec = resolve_prec(cli.prec)?;
    match &cli.command {
        Command::Tables => cmd_tables(cli.format),
        Command::Verify { lmax } => cmd_verify(*lmax, prec, cli.format),
        Command::Gauss { ell } => cmd_gauss(*ell, prec, cli.format),
        Command::Curve { ell, prime } => cmd_curve(*ell, *prime, cli.format),
        Command::Sha { ell } => cmd_sha(*ell, prec, cli.format),
    }
}

fn resolve_prec(flag: Option<u32>) -> Result<u32, RunError> {
    let prec = match flag {
        Some(p) => p,
        None => match std::env::var("EISGAUSS_PREC") {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| RunError::Usage(format!("EISGAUSS_PREC is not an integer: {s}")))?,
            Err(_) => 128,
        },
    };
    if !(64..=4096).contains(&prec) {
        return Err(RunError::Usage(format!(
            "precision {prec} is outside the supported range 64..=4096"
        )));
    }
    Ok(prec)
}

fn require_json(format: Format, command: &str) -> Result<(), RunError> {
    if format == Format::Json {
        Ok(())
    } else {
        Err(RunError::Usage(format!("{command} only emits JSON")))
    }
}

fn admissible(ell: u64) -> Result<PrimaryPrime, RunError> {
    let curve = split_prime(ell).map_err(usage)?;
    let class = curve.residue_class_mod_9();
    if class == 4 || class == 7 {
        Ok(curve)
    } else {
        Err(RunError::Usage(format!(
            "residue class {class} mod 9 is outside the supported cases"
        )))
    }
}

fn cmd_tables(format: Format) -> Result<(String, bool), RunError> {
    let table = BhTable::shared(68).map_err(check)?;
    let c_rows: Vec<(usize, String)> = table
        .c_indices()
        .filter(|&k| (1..=67).contains(&k))
        .map(|k| (k, table.little_c(k).to_string()))
        .collect();
    let d_rows: Vec<(usize, String)> = table
        .d_indices()
        .filter(|&k| (2..=56).contains(&k))
        .map(|k| (k, ratio_string(&table.little_d(k as u64))))
        .collect();
    let g_rows: Vec<(usize, String)> = (1..=7)
        .map(|n| (6 * n, ratio_string(&table.g(n))))
        .collect();
    let bh_rows: Vec<(usize, String)> = (1..=7)
        .map(|n| (6 * n, ratio_string(&table.bh(n))))
        .collect();
    let payload = match format {
        Format::Json => {
            let mut map = Map::new();
            for (k, v) in &c_rows {
                map.insert(format!("c_{k}"), Value::String(v.clone()));
            }
            for (k, v) in &d_rows {
                map.insert(format!("d_{k}"), Value::String(v.clone()));
            }
            for (k, v) in &g_rows {
                map.insert(format!("G_{k}"), Value::String(v.clone()));
            }
            for (k, v) in &bh_rows {
                map.insert(format!("BH_{k}"), Value::String(v.clone()));
            }
            serde_json::to_string_pretty(&Value::Object(map)).expect("tables serialize") + "\n"
        }
        Format::Csv => {
            let mut out = String::new();
            for (name, rows) in
                [("c", &c_rows), ("d", &d_rows), ("G", &g_rows), ("BH", &bh_rows)]
            {
                out.push_str(&format!("# {name}\nn,value\n"));
                for (k, v) in rows {
                    out.push_str(&format!("{k},{v}\n"));
                }
                out.push('\n');
            }
            out
        }
        Format::Markdown => {
            let mut out = String::new();
            for (name, rows) in
                [("c", &c_rows), ("d", &d_rows), ("G", &g_rows), ("BH", &bh_rows)]
            {
                out.push_str(&format!("## {name}\n\n| n | {name}_n |\n| ---: | ---: |\n"));
                for (k, v) in rows {
                    out.push_str(&format!("| {k} | {v} |\n"));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok((payload, true))
}

fn cmd_verify(lmax: u64, prec: u32, format: Format) -> Result<(String, bool), RunError> {
    require_json(format, "verify")?;
    let opts = PipelineOptions {
        start_bits: prec,
        max_bits: prec.max(1024),
        lfactor_norm_bound: 100,
    };
    let results = sweep(lmax, &opts);
    let mut lines = Vec::new();
    let (mut passed, mut skipped, mut failed) = (0u32, 0u32, 0u32);
    for (ell, res) in results {
        let line = match res {
            Ok(record) => {
                if record.passes {
                    passed += 1;
                } else {
                    failed += 1;
                }
                serde_json::to_string(&record).expect("record serializes")
            }
            Err(Error::UnsupportedResidueClass(1)) => {
                skipped += 1;
                serde_json::to_string(&json!({
                    "ell": ell,
                    "skipped": "excluded residue class"
                }))
                .expect("skip record serializes")
            }
            Err(e) => {
                failed += 1;
                serde_json::to_string(&json!({
                    "ell": ell,
                    "error": e.to_string()
                }))
                .expect("error record serializes")
            }
        };
        lines.push(line);
    }
    eprintln!("verify: {passed} passed, {skipped} skipped, {failed} failed");
    Ok((lines.join("\n") + "\n", failed == 0))
}

fn cmd_gauss(ell: u64, prec: u32, format: Format) -> Result<(String, bool), RunError> {
    require_json(format, "gauss")?;
    let curve = admissible(ell)?;
    let data = gauss_data(&curve, prec).map_err(check)?;
    let alpha = alpha_with_ladder(&curve, prec, prec.max(4096)).map_err(check)?;
    let (g_re, g_im) = data.gauss_sum.to_hex();
    let (lt_re, lt_im) = data.lambda_tilde.to_hex();
    let (ar_re, ar_im) = data.alpha_raw.to_hex();
    let payload = json!({
        "ell": ell,
        "lambda": curve.lambda(),
        "class_mod_9": curve.residue_class_mod_9(),
        "precision_bits": prec,
        "gauss_sum": {"re": g_re, "im": g_im},
        "lambda_tilde": {"re": lt_re, "im": lt_im},
        "alpha_raw": {"re": ar_re, "im": ar_im},
        "alpha": alpha.value,
        "alpha_bits": alpha.bits,
        "alpha_residual": alpha.residual.to_hex(),
    });
    Ok((serde_json::to_string_pretty(&payload).expect("gauss serializes") + "\n", true))
}

fn split_count_records(curve: &PrimaryPrime, p: u64) -> Result<Vec<Value>, RunError> {
    let place = split_prime(p).map_err(usage)?;
    let mut out = Vec::new();
    for pl in [place.clone(), place.conjugate()] {
        if residue_iso(curve.lambda(), &pl) == 0 {
            out.push(json!({
                "norm": p,
                "degree": 1,
                "generator": pl.lambda(),
                "bad_reduction": true,
            }));
            continue;
        }
        let brute = count_points_split(curve, &pl).map_err(check)?;
        let formula = count_points_split_formula(curve, &pl).map_err(check)?;
        out.push(json!({
            "norm": p,
            "degree": 1,
            "generator": pl.lambda(),
            "brute": brute,
            "formula": formula,
            "matches": brute == formula,
        }));
    }
    Ok(out)
}

fn inert_count_record(curve: &PrimaryPrime, q: u64) -> Result<Value, RunError> {
    let brute = count_points_inert(curve, q).map_err(usage)?;
    let formula = count_points_inert_formula(curve, q).map_err(check)?;
    Ok(json!({
        "norm": q * q,
        "degree": 2,
        "generator": EisensteinInt::new(-(q as i64), 0),
        "brute": brute,
        "formula": formula,
        "matches": brute == formula,
    }))
}

fn cmd_curve(ell: u64, prime: Option<u64>, format: Format) -> Result<(String, bool), RunError> {
    require_json(format, "curve")?;
    let curve = admissible(ell)?;
    let counts: Vec<Value> = match prime {
        Some(3) => {
            return Err(RunError::Usage(
                "the place over 3 is ramified; its data is in the reduction fields".to_string(),
            ))
        }
        Some(p) if p % 3 == 1 => split_count_records(&curve, p)?,
        Some(q) => vec![inert_count_record(&curve, q)?],
        None => {
            let mut all = Vec::new();
            for p in [7u64, 13, 19, 31] {
                all.extend(split_count_records(&curve, p)?);
            }
            for q in [2u64, 5, 11] {
                all.push(inert_count_record(&curve, q)?);
            }
            all
        }
    };
    let all_match = counts
        .iter()
        .all(|c| c["matches"].as_bool().unwrap_or(c["bad_reduction"].as_bool().unwrap_or(false)));
    let payload = json!({
        "ell": ell,
        "lambda": curve.lambda(),
        "torsion": torsion_order(&curve).map_err(check)?,
        "reduction_curve_prime": tate_local(&curve, BadPlace::CurvePrime).map_err(check)?,
        "reduction_ramified": tate_local(&curve, BadPlace::Ramified).map_err(check)?,
        "counts": counts,
        "all_match": all_match,
    });
    Ok((
        serde_json::to_string_pretty(&payload).expect("curve serializes") + "\n",
        all_match,
    ))
}

fn cmd_sha(ell: u64, prec: u32, format: Format) -> Result<(String, bool), RunError> {
    require_json(format, "sha")?;
    let curve = admissible(ell)?;
    let alpha = alpha_with_ladder(&curve, prec, prec.max(1024)).map_err(check)?;
    let prediction = sha_prediction(&curve, &alpha.value).map_err(check)?;
    let congruence = check_sha_congruence(&curve, &prediction).map_err(check)?;
    let cv = central_value(&curve, &alpha, prec).map_err(check)?;
    let (v_re, v_im) = cv.value.to_hex();
    let all_pass = prediction.stripped_is_square && congruence.matches;
    let payload = json!({
        "ell": ell,
        "alpha": alpha.value,
        "predicted_sha": ratio_string(&prediction.order),
        "sha": prediction,
        "congruence": congruence,
        "central_value": {
            "bits": cv.bits,
            "value": {"re": v_re, "im": v_im},
            "curve_value": cv.curve_value.to_hex(),
            "curve_value_approx": cv.curve_value.to_f64(),
        },
    });
    Ok((
        serde_json::to_string_pretty(&payload).expect("sha serializes") + "\n",
        all_pass,
    ))
}
