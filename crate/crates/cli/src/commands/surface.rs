use std::f64::consts::PI;

use serde_json::{json, Value};
use susy_tj::extrapolate::{bst_extrapolate, BstResult};
use susy_tj::ground_state::solve_ground_state;
use susy_tj::thermo::{surface_energy, SurfaceEnergyResult};

use super::{keys_without_params, list_of_f64, output};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{fmt_sig, Format, Table};

pub const DEFAULT_SIZES: &str = "8,16,32,64,128,256,512,1024";

struct Point {
    exact: SurfaceEnergyResult,
    /// `(L, E_hom, F_L)` and the BST result, with `--bst`.
    finite: Option<(Vec<(usize, f64, f64)>, BstResult)>,
}

/// `ζ` values from the `zeta` list or an even grid.
fn grid(cfg: &RunConfig) -> CliResult<Vec<f64>> {
    if let Some(list) = list_of_f64(cfg, "zeta")? {
        return Ok(list);
    }
    let lo = cfg.f64_or("zeta_min", 0.0)?;
    let hi = cfg.f64_or("zeta_max", 5.0)?;
    let n = cfg.usize_or("points", 101)?;
    if n < 2 || !(hi > lo) {
        return Err(CliError::Validation(format!("need points >= 2 and zeta_max > zeta_min, got {n}, [{lo}, {hi}]")));
    }
    Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect())
}

pub fn omega_of(cfg: &RunConfig) -> CliResult<susy_tj::extrapolate::Omega> {
    use susy_tj::extrapolate::Omega;
    match cfg.get("omega") {
        None | Some("auto") => Ok(Omega::Auto),
        Some(_) => Ok(Omega::Fixed(cfg.f64("omega")?.expect("present"))),
    }
}

/// `F_L = E_hom(L) + 2L/π` over the given sizes.
pub fn finite_sequence(zeta: f64, sizes: &[usize]) -> CliResult<Vec<(usize, f64, f64)>> {
    sizes
        .iter()
        .map(|&l| {
            let e = solve_ground_state(l, zeta)?.energy;
            Ok((l, e, e + 2.0 * l as f64 / PI))
        })
        .collect()
}

pub fn run(cfg: &mut RunConfig) -> CliResult<()> {
    cfg.set_default("tol", "1e-4");
    let bst = cfg.flag("bst")?;
    if bst {
        cfg.set_default("sizes", DEFAULT_SIZES);
        cfg.set_default("omega", "auto");
    }
    let out = output(cfg, &keys_without_params(&["zeta", "zeta_min", "zeta_max", "points", "bst", "sizes", "omega"]))?;
    let zetas = grid(cfg)?;
    let omega = omega_of(cfg)?;
    let sizes = cfg.usize_list("sizes")?.unwrap_or_default();

    let points: Vec<Point> = zetas
        .iter()
        .map(|&zeta| {
            let exact = surface_energy(zeta)?;
            let finite = if bst {
                let seq = finite_sequence(zeta, &sizes)?;
                let pts: Vec<(f64, f64)> = seq.iter().map(|&(l, _, f)| (l as f64, f)).collect();
                Some((seq, bst_extrapolate(&pts, omega)?))
            } else {
                None
            };
            Ok(Point { exact, finite })
        })
        .collect::<CliResult<_>>()?;

    match out.format {
        Format::Csv => {
            let mut cols = vec!["zeta", "E_b_closed", "E_b_quadrature", "delta_term"];
            if bst {
                cols.extend(["E_b_bst", "bst_omega", "bst_spread"]);
            }
            let mut table = Table::new(&cols);
            let mut seq_table = Table::new(&["zeta", "L", "E_hom", "F_L"]);
            for p in &points {
                let e = &p.exact;
                let mut row = vec![fmt_sig(e.zeta), fmt_sig(e.value), fmt_sig(e.quadrature_value), fmt_sig(e.delta_term)];
                if let Some((seq, r)) = &p.finite {
                    row.extend([fmt_sig(r.estimate), fmt_sig(r.table.omega), fmt_sig(r.table.spread)]);
                    for &(l, eh, f) in seq {
                        seq_table.push(vec![fmt_sig(e.zeta), l.to_string(), fmt_sig(eh), fmt_sig(f)]);
                    }
                }
                table.push(row);
            }
            out.write_csv(None, &table)?;
            if bst {
                out.write_csv(Some("sequence"), &seq_table)?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .map(|p| {
                    let mut v = json!({
                        "zeta": p.exact.zeta,
                        "region": p.exact.region,
                        "E_b_closed": p.exact.value,
                        "E_b_quadrature": p.exact.quadrature_value,
                        "delta_term": p.exact.delta_term,
                    });
                    if let Some((seq, r)) = &p.finite {
                        v["bst"] = json!({"omega": r.table.omega, "estimate": r.estimate, "spread": r.table.spread});
                        v["sequence"] = seq.iter().map(|&(l, e, f)| json!({"L": l, "E_hom": e, "F_L": f})).collect();
                    }
                    v
                })
                .collect();
            out.write_json(None, json!({ "curve": rows }))?;
        }
    }

    if bst {
        let tol = super::tolerance(cfg)?;
        let worst = points
            .iter()
            .filter_map(|p| p.finite.as_ref().map(|(_, r)| (p.exact.zeta, (r.estimate - p.exact.value).abs())))
            .fold((f64::NAN, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
        eprintln!("largest |BST - closed form| = {:.3e} at zeta = {}", worst.1, worst.0);
        if worst.1 > tol {
            return Err(CliError::Numerical(format!("BST differs from the closed form by {:e} > {tol:e}", worst.1)));
        }
    }
    Ok(())
}
