use serde_json::json;
use susy_tj::graded_algebra::verify_identities;
use susy_tj::lattice::{hamiltonian_identity_residual, LatticeSpec};

use super::{keys_with_params, output, tolerance};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_sig, Format, Table};

struct Check {
    name: String,
    residual: f64,
    passed: bool,
}

pub fn run(cfg: &mut RunConfig) -> CliResult<()> {
    cfg.set_default("preset", "benchmark");
    cfg.set_default("tol", "1e-10");
    cfg.set_default("seed", "1");
    cfg.set_default("samples", "100");
    cfg.set_default("sizes", "2,3");
    let out = output(cfg, &keys_with_params(&["samples", "sizes"]))?;
    let params = cfg.params("benchmark")?;
    let tol = tolerance(cfg)?;
    let samples = cfg.usize_or("samples", 100)?;
    let seed = cfg.u64_or("seed", 0)?;
    let sizes = cfg.usize_list("sizes")?.unwrap_or_default();

    let report = verify_identities(&params, samples, tol, seed)?;
    let mut checks: Vec<Check> = report
        .residuals
        .iter()
        .map(|r| Check {
            name: r.name.to_string(),
            residual: r.max_residual,
            passed: r.passed,
        })
        .collect();
    for l in sizes {
        let residual = hamiltonian_identity_residual(&LatticeSpec::new(l, params)?)?;
        checks.push(Check {
            name: format!("hamiltonian_identity_L{l}"),
            residual,
            passed: residual <= tol,
        });
    }

    match out.format {
        Format::Csv => {
            let mut table = Table::new(&["check", "max_residual", "tol", "passed"]);
            for c in &checks {
                table.push(vec![c.name.clone(), fmt_sig(c.residual), fmt_sig(tol), c.passed.to_string()]);
            }
            out.write_csv(None, &table)?;
        }
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| json!({"check": c.name, "max_residual": c.residual, "passed": c.passed}))
                .collect();
            out.write_json(None, json!({"tol": tol, "checks": rows, "passed": checks.iter().all(|c| c.passed)}))?;
        }
    }
    for c in &checks {
        eprintln!("{:<28} {:>12.3e}  {}", c.name, c.residual, if c.passed { "pass" } else { "FAIL" });
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("residual above {tol:e} in: {}", failed.join(", "))))
    }
}
