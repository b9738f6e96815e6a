//! Finite-size evidence for the boundary bound root.
//!
//! The exact ground state at small `L` is fed to the nested Bethe solver; the
//! charge root nearest `v = ξ' - η` (that is `μ = ζ i`) is tracked as `L`
//! grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{sector_ground_states, LatticeSpec};
use crate::params::{BoundaryParams, C64};
use crate::tq_spectrum::{solve_nested_bae, NewtonOptions, SeedStrategy};

/// Bethe and exact energies must agree this well to accept a configuration.
const ENERGY_MATCH: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct BoundRootPoint {
    #[serde(rename = "L")]
    pub sites: usize,
    pub electrons: usize,
    pub energy_exact: f64,
    pub energy_bethe: f64,
    /// The tracked charge root as `[re, im]`.
    pub root: [f64; 2],
    pub distance: f64,
    pub residual: f64,
}

/// Solves the ground state at each size and locates the bound root.
pub fn bound_root_trace(params: &BoundaryParams, sizes: &[usize], starts: usize, seed: u64) -> Result<Vec<BoundRootPoint>> {
    let target = C64::new(params.xi_prime - params.eta, 0.0);
    sizes
        .iter()
        .map(|&sites| {
            let spec = LatticeSpec::new(sites, *params)?;
            let ground = sector_ground_states(&spec)?
                .into_iter()
                .min_by(|a, b| a.energy.total_cmp(&b.energy))
                .expect("at least one sector");
            let n = ground.electrons;
            let strategy = SeedStrategy::LambdaFit {
                vectors: vec![ground.vector],
                starts,
                seed,
            };
            let report = solve_nested_bae(&spec, n, n, &[strategy], &NewtonOptions::default())?;
            let solution = report
                .solutions
                .into_iter()
                .filter(|s| (s.energy - ground.energy).abs() < ENERGY_MATCH)
                .min_by(|a, b| (a.energy - ground.energy).abs().total_cmp(&(b.energy - ground.energy).abs()))
                .ok_or_else(|| Error::Numerical(format!("no Bethe configuration for the ground state at L = {sites}")))?;
            let root = solution
                .roots
                .v
                .iter()
                .copied()
                .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
                .ok_or_else(|| Error::Numerical(format!("ground state at L = {sites} has no charge roots")))?;
            Ok(BoundRootPoint {
                sites,
                electrons: n,
                energy_exact: ground.energy,
                energy_bethe: solution.energy,
                root: [root.re, root.im],
                distance: (root - target).norm(),
                residual: solution.residual,
            })
        })
        .collect()
}

/// Decay rate `δ` from a least-squares fit of `ln(distance) = c - δ L`.
pub fn decay_rate(points: &[BoundRootPoint]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|p| !(p.distance > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.sites as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.distance.ln()).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.sites as f64 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.sites as f64 - mx) * (p.distance.ln() - my)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}
