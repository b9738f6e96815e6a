//! Size dependence of the inhomogeneous contribution `E_inh = E_hom - E_true`.

use serde::Serialize;

use super::solve_ground_state;
use crate::error::{Error, Result};
use crate::lattice::{exact_spectrum, LatticeSpec};
use crate::params::BoundaryParams;

/// Gaps smaller than this are treated as zero when fitting.
const ZERO_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingPoint {
    #[serde(rename = "L")]
    pub sites: usize,
    #[serde(rename = "E_hom")]
    pub e_hom: f64,
    #[serde(rename = "E_true")]
    pub e_true: f64,
    #[serde(rename = "E_inh")]
    pub e_inh: f64,
}

/// Least-squares power law `E_inh = γ L^β`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingFit {
    pub gamma: f64,
    pub beta: f64,
    pub r2: f64,
    pub points_used: usize,
}

fn check_region(params: &BoundaryParams) -> Result<()> {
    if (params.eta - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!("ground-state formulas assume eta = 1, got {}", params.eta)));
    }
    if params.xi >= 0.0 {
        return Err(Error::validation(format!("ground-state analysis needs xi < 0, got {}", params.xi)));
    }
    if params.zeta() <= -0.5 {
        return Err(Error::validation(format!("ground-state analysis needs xi' < 1, got {}", params.xi_prime)));
    }
    Ok(())
}

/// `E_hom(L) - E_true(L)` with `E_true` the exact ground energy.
pub fn inhomogeneous_gap(sites: usize, params: &BoundaryParams) -> Result<ScalingPoint> {
    check_region(params)?;
    let hom = solve_ground_state(sites, params.zeta())?;
    let exact = exact_spectrum(&LatticeSpec::new(sites, *params)?, 1)?;
    let e_true = exact.ground_energy();
    Ok(ScalingPoint {
        sites,
        e_hom: hom.energy,
        e_true,
        e_inh: hom.energy - e_true,
    })
}

/// `inhomogeneous_gap` over a list of sizes, in the given order.
pub fn scaling_points(sizes: &[usize], params: &BoundaryParams) -> Result<Vec<ScalingPoint>> {
    sizes.iter().map(|&l| inhomogeneous_gap(l, params)).collect()
}

/// Fits a line through `(ln L, ln |E_inh|)`; `γ` carries the common sign.
pub fn scaling_fit(points: &[ScalingPoint]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::validation(format!("need at least 3 points, got {}", points.len())));
    }
    if points.iter().all(|p| p.e_inh.abs() < ZERO_GAP) {
        return Err(Error::Numerical(
            "E_inh vanishes at every size (parallel fields?), no power law to fit".into(),
        ));
    }
    let sign = points[0].e_inh.signum();
    if points.iter().any(|p| p.e_inh.abs() < ZERO_GAP || p.e_inh.signum() != sign) {
        return Err(Error::Numerical("E_inh changes sign or vanishes, cannot fit a power law".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.sites as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.e_inh.abs().ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::validation("all sizes are equal"));
    }
    let beta = sxy / sxx;
    let q = my - beta * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(ScalingFit {
        gamma: sign * q.exp(),
        beta,
        r2,
        points_used: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(f64) -> f64) -> Vec<ScalingPoint> {
        [4, 6, 8, 10]
            .into_iter()
            .map(|l| ScalingPoint {
                sites: l,
                e_hom: 0.0,
                e_true: 0.0,
                e_inh: f(l as f64),
            })
            .collect()
    }

    #[test]
    fn exact_power_law() {
        let fit = scaling_fit(&synthetic(|l| -0.05 / l)).unwrap();
        assert!((fit.gamma + 0.05).abs() < 1e-12);
        assert!((fit.beta + 1.0).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        assert_eq!(fit.points_used, 4);
    }

    #[test]
    fn refuses_bad_inputs() {
        assert!(scaling_fit(&synthetic(|l| if l < 7.0 { 1.0 } else { -1.0 })).is_err());
        assert!(scaling_fit(&synthetic(|_| 0.0)).is_err());
        assert!(scaling_fit(&synthetic(|l| 1.0 / l)[..2]).unwrap_err().is_validation());
    }
}
