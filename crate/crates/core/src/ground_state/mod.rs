//! Large-L ground state from the homogeneous Bethe equations.
//!
//! With the inhomogeneous term dropped and `M̄ = 0`, the ground state has
//! `M = L/2` charge roots `v_j = i μ_j - 1/2` on a line, fixed by the scalar
//! counting equations
//!
//! ```text
//! 2π I_j = 2 arctan(μ_j / ζ) + 4L arctan(2 μ_j),   ζ = 1/2 - ξ'.
//! ```
//!
//! For `ζ >= 0` all roots are real with `I_j = 1..L/2`. For `-1/2 < ζ < 0` one
//! root is the boundary bound state at `μ = ζ i` and the remaining `L/2 - 1`
//! are real. All formulas use `η = 1`.

mod bound;
mod scaling;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub use bound::{bound_root_trace, decay_rate, BoundRootPoint};
pub use scaling::{inhomogeneous_gap, scaling_fit, scaling_points, ScalingFit, ScalingPoint};

/// Bisection stops once the bracket is this narrow.
const BRACKET_WIDTH: f64 = 1e-3;
/// Newton stops once a step is this small relative to the root.
const NEWTON_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Serialize)]
pub struct GroundStateSolution {
    #[serde(rename = "L")]
    pub sites: usize,
    pub zeta: f64,
    /// Positive real roots, strictly increasing.
    pub mu: Vec<f64>,
    pub has_bound_root: bool,
    pub quantum_numbers: Vec<u32>,
    #[serde(rename = "E_hom")]
    pub energy: f64,
}

/// `arctan(μ/ζ)` with the `ζ = 0` limit `π/2 · sign(μ)`.
fn boundary_phase(mu: f64, zeta: f64) -> f64 {
    if zeta == 0.0 {
        std::f64::consts::FRAC_PI_2 * mu.signum()
    } else {
        (mu / zeta).atan()
    }
}

fn counting(mu: f64, sites: usize, zeta: f64) -> f64 {
    2.0 * boundary_phase(mu, zeta) + 4.0 * sites as f64 * (2.0 * mu).atan()
}

fn counting_derivative(mu: f64, sites: usize, zeta: f64) -> f64 {
    let edge = if zeta == 0.0 { 0.0 } else { 2.0 * zeta / (mu * mu + zeta * zeta) };
    edge + 8.0 * sites as f64 / (1.0 + 4.0 * mu * mu)
}

/// `2π I - 2 arctan(μ/ζ) - 4L arctan(2μ)` for one root.
pub fn counting_residual(mu: f64, quantum_number: u32, sites: usize, zeta: f64) -> f64 {
    std::f64::consts::TAU * quantum_number as f64 - counting(mu, sites, zeta)
}

/// Solves one counting equation by bisection followed by safeguarded Newton.
fn solve_one(quantum_number: u32, sites: usize, zeta: f64) -> Result<f64> {
    let target = std::f64::consts::TAU * quantum_number as f64;
    let f = |mu: f64| counting(mu, sites, zeta) - target;
    // f(0) <= 0 for every I >= 1, and f grows to 2πL - 2π I ± π at infinity.
    let mut lo = 0.0;
    let mut hi = 1.0;
    while f(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Numerical(format!("no bracket for I = {quantum_number}")));
        }
    }
    while hi - lo > BRACKET_WIDTH {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut mu = 0.5 * (lo + hi);
    for _ in 0..100 {
        let value = f(mu);
        if value > 0.0 {
            hi = mu;
        } else {
            lo = mu;
        }
        let mut next = mu - value / counting_derivative(mu, sites, zeta);
        if !(lo..=hi).contains(&next) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - mu).abs();
        mu = next;
        if step <= NEWTON_TOL * mu.max(1.0) {
            return Ok(mu);
        }
    }
    Err(Error::NoConvergence {
        iterations: 100,
        residual: f(mu).abs(),
    })
}

fn check_even(sites: usize) -> Result<()> {
    if sites < 2 || sites % 2 != 0 {
        return Err(Error::validation(format!("L must be even and at least 2, got {sites}")));
    }
    Ok(())
}

fn solve_roots(sites: usize, zeta: f64, count: u32) -> Result<Vec<f64>> {
    (1..=count).into_par_iter().map(|i| solve_one(i, sites, zeta)).collect()
}

/// Real-root ground state for `ζ >= 0`: `L/2` roots with `I_j = 1..L/2`.
pub fn solve_real_roots(sites: usize, zeta: f64) -> Result<GroundStateSolution> {
    check_even(sites)?;
    if !(zeta >= 0.0) || !zeta.is_finite() {
        return Err(Error::validation(format!("real-root region needs finite zeta >= 0, got {zeta}")));
    }
    let count = (sites / 2) as u32;
    let mu = solve_roots(sites, zeta, count)?;
    let mut sol = GroundStateSolution {
        sites,
        zeta,
        mu,
        has_bound_root: false,
        quantum_numbers: (1..=count).collect(),
        energy: 0.0,
    };
    sol.energy = energy_hom(&sol);
    Ok(sol)
}

/// Ground state with the boundary bound root for `-1/2 < ζ < 0`.
pub fn solve_bound_state_roots(sites: usize, zeta: f64) -> Result<GroundStateSolution> {
    check_even(sites)?;
    if !(zeta > -0.5 && zeta < 0.0) {
        return Err(Error::validation(format!("bound-state region needs -1/2 < zeta < 0, got {zeta}")));
    }
    let count = (sites / 2 - 1) as u32;
    let mu = solve_roots(sites, zeta, count)?;
    let mut sol = GroundStateSolution {
        sites,
        zeta,
        mu,
        has_bound_root: true,
        quantum_numbers: (1..=count).collect(),
        energy: 0.0,
    };
    sol.energy = energy_hom(&sol);
    Ok(sol)
}

/// Picks the region from the sign of `ζ`.
pub fn solve_ground_state(sites: usize, zeta: f64) -> Result<GroundStateSolution> {
    if zeta >= 0.0 {
        solve_real_roots(sites, zeta)
    } else {
        solve_bound_state_roots(sites, zeta)
    }
}

/// Energy of the bound root, `-1/(1/4 - ζ²)`.
pub fn bound_root_energy(zeta: f64) -> f64 {
    -1.0 / (0.25 - zeta * zeta)
}

/// `-Σ 1/(μ² + 1/4) + 2M`, plus the bound-root term when present; `M`
/// counts the bound root.
pub fn energy_hom(sol: &GroundStateSolution) -> f64 {
    let m = sol.mu.len() + usize::from(sol.has_bound_root);
    let real: f64 = sol.mu.iter().map(|&x| 1.0 / (x * x + 0.25)).sum();
    let bound = if sol.has_bound_root { bound_root_energy(sol.zeta) } else { 0.0 };
    -real + bound + 2.0 * m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_and_single_root_energies() {
        let empty = GroundStateSolution {
            sites: 2,
            zeta: 0.1,
            mu: vec![],
            has_bound_root: false,
            quantum_numbers: vec![],
            energy: 0.0,
        };
        assert_eq!(energy_hom(&empty), 0.0);
        let single = GroundStateSolution { mu: vec![0.0], ..empty };
        assert_eq!(energy_hom(&single), -2.0);
    }

    #[test]
    fn bound_term_value() {
        assert!((bound_root_energy(-0.25) + 16.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn roots_satisfy_counting_equations() {
        for (sites, zeta) in [(8, 0.05), (64, 0.2), (64, 0.0), (32, -0.2), (16, -0.45), (10, -0.01)] {
            let sol = solve_ground_state(sites, zeta).unwrap();
            for (&mu, &i) in sol.mu.iter().zip(&sol.quantum_numbers) {
                assert!(counting_residual(mu, i, sites, zeta).abs() < 1e-12);
            }
            assert!(sol.mu.windows(2).all(|w| w[0] < w[1]));
            assert!(sol.mu.iter().all(|&m| m > 0.0));
        }
    }

    #[test]
    fn root_counts_follow_region() {
        assert_eq!(solve_ground_state(12, 0.3).unwrap().mu.len(), 6);
        let b = solve_ground_state(12, -0.3).unwrap();
        assert_eq!(b.mu.len(), 5);
        assert!(b.has_bound_root);
    }

    #[test]
    fn residual_decreases_in_mu() {
        let f = |m: f64| counting_residual(m, 1, 10, 0.2);
        let mut prev = f(0.0);
        for k in 1..200 {
            let next = f(k as f64 * 0.05);
            assert!(next < prev);
            prev = next;
        }
    }

    #[test]
    fn residual_limit_at_large_mu() {
        let (sites, i) = (6, 2);
        let r = counting_residual(1e12, i, sites, 0.3);
        let expected = 2.0 * PI * i as f64 - PI - 2.0 * PI * sites as f64;
        assert!((r - expected).abs() < 1e-9);
    }

    #[test]
    fn largest_root_below_fermi_edge() {
        for zeta in [0.05, 0.2, 1.0] {
            let sites = 256;
            let sol = solve_real_roots(sites, zeta).unwrap();
            let b = 0.5 + (PI - 2.0 * (1.0 / (2.0 * zeta)).atan()) / (4.0 * sites as f64 + 4.0 * zeta / (1.0 + 4.0 * zeta * zeta));
            let top = *sol.mu.last().unwrap();
            assert!(top < b && top > 0.45, "{top} vs {b}");
        }
    }

    #[test]
    fn region_validation() {
        assert!(solve_real_roots(8, -0.1).unwrap_err().is_validation());
        assert!(solve_bound_state_roots(8, 0.1).unwrap_err().is_validation());
        assert!(solve_bound_state_roots(8, -0.5).unwrap_err().is_validation());
        assert!(solve_real_roots(7, 0.1).unwrap_err().is_validation());
    }
}
