use serde_json::json;
use susy_tj::ground_state::{scaling_fit, scaling_points};

use super::{keys_with_params, output};
use crate::config::RunConfig;
use crate::error::CliResult;
use crate::output::{fmt_sig, Format, Table};

pub fn run(cfg: &mut RunConfig) -> CliResult<()> {
    cfg.set_default("preset", "real-root");
    cfg.set_default("sizes", "4,6,8,10");
    let out = output(cfg, &keys_with_params(&["sizes"]))?;
    let params = cfg.params("real-root")?;
    let sizes = cfg.usize_list("sizes")?.unwrap_or_default();
    let points = scaling_points(&sizes, &params)?;
    let fit = scaling_fit(&points);

    match out.format {
        Format::Csv => {
            let mut table = Table::new(&["L", "E_hom", "E_true", "E_inh"]);
            for p in &points {
                table.push(vec![p.sites.to_string(), fmt_sig(p.e_hom), fmt_sig(p.e_true), fmt_sig(p.e_inh)]);
            }
            out.write_csv(None, &table)?;
            if let Ok(f) = &fit {
                out.write_json(Some("fit"), json!(f))?;
            }
        }
        Format::Json => {
            let fit_json = match &fit {
                Ok(f) => json!(f),
                Err(e) => json!({ "refused": e.to_string() }),
            };
            out.write_json(None, json!({"points": points, "fit": fit_json}))?;
        }
    }
    let f = fit?;
    eprintln!("E_inh = gamma L^beta: gamma = {:.6}, beta = {:.6}, r2 = {:.6}", f.gamma, f.beta, f.r2);
    Ok(())
}
