use serde_json::{json, Value};
use susy_tj::lattice::{eigensystem, LatticeSpec, TransferMatrix, DENSE_SITE_LIMIT};
use susy_tj::tq_spectrum::{eval_lambda, match_against_exact, MatchOptions, RootRecord};
use susy_tj::C64;

use super::{complex_list, keys_with_params, output, tolerance};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_sig, Format, Table};

/// Largest chain for which every level is matched to Bethe roots.
const MATCH_SITE_LIMIT: usize = 3;

struct Row {
    energy: f64,
    electrons: usize,
    record: Option<RootRecord>,
    family: Option<&'static str>,
}

struct LambdaSample {
    u: f64,
    level: usize,
    tq: C64,
    transfer: C64,
}

pub fn run(cfg: &mut RunConfig) -> CliResult<()> {
    cfg.set_default("preset", "benchmark");
    cfg.set_default("L", "2");
    cfg.set_default("tol", "1e-5");
    cfg.set_default("seed", "1");
    cfg.set_default("starts", "400");
    cfg.set_default("points", "50");
    let out = output(cfg, &keys_with_params(&["L", "starts", "points"]))?;
    let params = cfg.params("benchmark")?;
    let sites = cfg.usize_or("L", 2)?;
    let tol = tolerance(cfg)?;
    let points = cfg.usize_or("points", 50)?;
    if sites > DENSE_SITE_LIMIT {
        return Err(CliError::Validation(format!("the full spectrum needs L <= {DENSE_SITE_LIMIT}, got {sites}")));
    }
    if points < 2 {
        return Err(CliError::Validation("points must be at least 2".into()));
    }
    let spec = LatticeSpec::new(sites, params)?;
    let h = params.h();
    if params.is_diagonalizable_pair() {
        eprintln!("h = 0: the fields are parallel and the T-Q relation is homogeneous");
    } else {
        eprintln!("h = {}", complex_list(&[[h.re, h.im]]));
    }

    let levels = eigensystem(&spec)?;
    let rows: Vec<Row> = if sites <= MATCH_SITE_LIMIT {
        let opts = MatchOptions {
            random_seeds: cfg.usize_or("starts", 400)?,
            seed: cfg.u64_or("seed", 1)?,
            tol,
            ..MatchOptions::default()
        };
        let report = match_against_exact(&spec, &opts)?;
        report
            .levels
            .iter()
            .map(|l| Row {
                energy: l.exact_energy,
                electrons: l.electrons,
                record: l.solution.as_ref().map(|s| RootRecord::from_roots(&s.roots, s.energy, s.residual)),
                family: l.solution.as_ref().map(|s| s.family),
            })
            .collect()
    } else {
        eprintln!("L = {sites}: Bethe roots are matched only up to L = {MATCH_SITE_LIMIT}");
        levels
            .iter()
            .map(|l| Row {
                energy: l.energy,
                electrons: l.electrons,
                record: None,
                family: None,
            })
            .collect()
    };

    let transfer = TransferMatrix::new(&spec);
    let mut samples = Vec::new();
    for (level, (row, exact)) in rows.iter().zip(&levels).enumerate() {
        let Some(record) = &row.record else { continue };
        let roots = record.to_roots(params);
        for k in 0..points {
            let u = -1.0 + 2.0 * k as f64 / (points - 1) as f64;
            let z = C64::new(u, 0.0);
            samples.push(LambdaSample {
                u,
                level,
                tq: eval_lambda(z, &roots)?,
                transfer: transfer.expectation(z, &exact.vector),
            });
        }
    }
    let lambda_error = samples.iter().map(|s| (s.tq - s.transfer).norm()).fold(0.0, f64::max);

    match out.format {
        Format::Csv => {
            let mut table =
                Table::new(&["n", "E_n", "N_electrons", "E_bae", "M", "Mbar", "residual", "family", "v", "lam"]);
            for (n, r) in rows.iter().enumerate() {
                let rec = r.record.as_ref();
                table.push(vec![
                    n.to_string(),
                    fmt_sig(r.energy),
                    r.electrons.to_string(),
                    rec.map_or(String::new(), |x| fmt_sig(x.energy)),
                    rec.map_or(String::new(), |x| x.m.to_string()),
                    rec.map_or(String::new(), |x| x.mbar.to_string()),
                    rec.map_or(String::new(), |x| fmt_sig(x.residual)),
                    r.family.unwrap_or("").to_string(),
                    rec.map_or(String::new(), |x| complex_list(&x.v)),
                    rec.map_or(String::new(), |x| complex_list(&x.lam)),
                ]);
            }
            out.write_csv(None, &table)?;
            let mut curve = Table::new(&[
                "u_real",
                "u_imag",
                "eigenvalue_index",
                "lambda_tq_real",
                "lambda_tq_imag",
                "lambda_transfer_real",
                "lambda_transfer_imag",
            ]);
            for s in &samples {
                curve.push(vec![
                    fmt_sig(s.u),
                    "0".into(),
                    s.level.to_string(),
                    fmt_sig(s.tq.re),
                    fmt_sig(s.tq.im),
                    fmt_sig(s.transfer.re),
                    fmt_sig(s.transfer.im),
                ]);
            }
            out.write_csv(Some("lambda"), &curve)?;
            let records: Vec<&RootRecord> = rows.iter().filter_map(|r| r.record.as_ref()).collect();
            out.write_json(Some("roots"), json!({ "roots": records }))?;
        }
        Format::Json => {
            let levels: Vec<Value> = rows
                .iter()
                .enumerate()
                .map(|(n, r)| {
                    json!({
                        "n": n,
                        "E_n": r.energy,
                        "N_electrons": r.electrons,
                        "family": r.family,
                        "roots": r.record,
                    })
                })
                .collect();
            let curve: Vec<Value> = samples
                .iter()
                .map(|s| json!({"u": s.u, "eigenvalue_index": s.level, "tq": [s.tq.re, s.tq.im], "transfer": [s.transfer.re, s.transfer.im]}))
                .collect();
            out.write_json(
                None,
                json!({"h": [h.re, h.im], "levels": levels, "lambda": curve, "lambda_max_error": lambda_error}),
            )?;
        }
    }

    let unmatched: Vec<usize> = if sites <= MATCH_SITE_LIMIT {
        rows.iter().enumerate().filter(|(_, r)| r.record.is_none()).map(|(i, _)| i).collect()
    } else {
        Vec::new()
    };
    eprintln!(
        "{} levels, {} matched, max |Lambda_TQ - Lambda_transfer| = {:.3e}",
        rows.len(),
        rows.iter().filter(|r| r.record.is_some()).count(),
        lambda_error
    );
    if unmatched.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("unmatched levels: {unmatched:?}")))
    }
}
