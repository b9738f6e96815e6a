use std::path::Path;

use serde_json::json;
use susy_tj::extrapolate::bst_extrapolate;

use super::surface::{finite_sequence, omega_of, DEFAULT_SIZES};
use super::{keys_without_params, output};
use crate::config::{parse_number, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{fmt_sig, Format, Table};

/// Reads `L, F_L` rows; blank lines, `#` comments and one header line are skipped.
fn read_sequence(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        if rec.len() < 2 {
            return Err(CliError::Validation(format!("{}: row {} needs two columns", path.display(), i + 1)));
        }
        match (parse_number(&rec[0]), parse_number(&rec[1])) {
            (Ok(l), Ok(f)) => points.push((l, f)),
            _ if i == 0 => continue,
            _ => return Err(CliError::Validation(format!("{}: bad numbers in row {}", path.display(), i + 1))),
        }
    }
    Ok(points)
}

pub fn run(cfg: &mut RunConfig) -> CliResult<()> {
    cfg.set_default("omega", "auto");
    if cfg.get("input").is_none() {
        cfg.set_default("sizes", DEFAULT_SIZES);
    }
    let out = output(cfg, &keys_without_params(&["input", "omega", "zeta", "sizes"]))?;
    let points = match (cfg.get("input"), cfg.f64("zeta")?) {
        (Some(path), None) => read_sequence(Path::new(path))?,
        (None, Some(zeta)) => {
            let sizes = cfg.usize_list("sizes")?.unwrap_or_default();
            finite_sequence(zeta, &sizes)?.into_iter().map(|(l, _, f)| (l as f64, f)).collect()
        }
        (Some(_), Some(_)) => return Err(CliError::Validation("give either input or zeta, not both".into())),
        (None, None) => return Err(CliError::Validation("give a sequence file (input) or a zeta".into())),
    };
    let result = bst_extrapolate(&points, omega_of(cfg)?)?;

    match out.format {
        Format::Csv => {
            let mut table = Table::new(&["m", "n", "L_n", "T"]);
            for (m, column) in result.table.levels.iter().enumerate() {
                for (n, entry) in column.iter().enumerate() {
                    table.push(vec![
                        m.to_string(),
                        n.to_string(),
                        fmt_sig(points[n].0),
                        entry.map_or(String::new(), fmt_sig),
                    ]);
                }
            }
            out.write_csv(None, &table)?;
            out.write_json(
                Some("estimate"),
                json!({"omega": result.table.omega, "estimate": result.estimate, "spread": result.table.spread}),
            )?;
        }
        Format::Json => {
            out.write_json(
                None,
                json!({
                    "omega": result.table.omega,
                    "estimate": result.estimate,
                    "spread": result.table.spread,
                    "table": result.table.levels,
                }),
            )?;
        }
    }
    eprintln!(
        "estimate = {}, omega = {}, spread = {:.3e}",
        fmt_sig(result.estimate),
        result.table.omega,
        result.table.spread
    );
    Ok(())
}
