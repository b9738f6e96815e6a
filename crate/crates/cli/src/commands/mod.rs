//! One module per subcommand. Each fills in its defaults, checks its keys and
//! writes its outputs.

pub mod extrapolate;
pub mod scaling;
pub mod spectrum;
pub mod surface;
pub mod verify;

use std::path::PathBuf;

use crate::config::{RunConfig, COUPLING_KEYS, PARAM_KEYS};
use crate::error::{CliError, CliResult};
use crate::output::{Format, Output};

/// Keys every subcommand accepts.
const OUTPUT_KEYS: [&str; 4] = ["seed", "tol", "out", "format"];

/// Output keys, parameter keys and `extra`.
fn keys_with_params(extra: &[&'static str]) -> Vec<&'static str> {
    let mut keys: Vec<&str> = OUTPUT_KEYS.to_vec();
    keys.push("preset");
    keys.extend(PARAM_KEYS);
    keys.extend(COUPLING_KEYS);
    keys.extend(extra);
    keys
}

fn keys_without_params(extra: &[&'static str]) -> Vec<&'static str> {
    let mut keys: Vec<&str> = OUTPUT_KEYS.to_vec();
    keys.extend(extra);
    keys
}

/// Checks the keys and builds the output once the configuration is final.
fn output(cfg: &RunConfig, allowed: &[&str]) -> CliResult<Output> {
    cfg.check_keys(allowed)?;
    let format = match cfg.get("format") {
        None | Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        Some(other) => return Err(CliError::Validation(format!("format must be csv or json, got `{other}`"))),
    };
    Ok(Output::new(cfg.get("out").map(PathBuf::from), format, cfg.clone()))
}

/// Positive tolerance from the `tol` key.
fn tolerance(cfg: &RunConfig) -> CliResult<f64> {
    let tol = cfg.f64("tol")?.expect("tol has a default");
    if tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Validation(format!("tol must be positive, got {tol}")))
    }
}

fn list_of_f64(cfg: &RunConfig, key: &str) -> CliResult<Option<Vec<f64>>> {
    cfg.get(key)
        .map(|v| {
            v.split(',')
                .map(|s| crate::config::parse_number(s).map_err(|e| CliError::Validation(format!("{key}: {e}"))))
                .collect()
        })
        .transpose()
}

/// `[re, im]` pairs rendered as `re+imi`, joined by `;`.
fn complex_list(zs: &[[f64; 2]]) -> String {
    zs.iter()
        .map(|[re, im]| {
            let sign = if *im < 0.0 { "-" } else { "+" };
            format!("{}{}{}i", crate::output::fmt_sig(*re), sign, crate::output::fmt_sig(im.abs()))
        })
        .collect::<Vec<_>>()
        .join(";")
}
