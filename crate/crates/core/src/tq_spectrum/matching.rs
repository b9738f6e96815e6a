use serde::Serialize;

use super::solve::{solve_nested_bae, BaeSolution, SeedStrategy};
use super::NewtonOptions;
use crate::error::{Error, Result};
use crate::lattice::{eigensystem, LatticeSpec};

#[derive(Debug, Clone)]
pub struct MatchOptions {
    /// Admissible `(M, M̄)`; `None` selects them from `h` and `L`.
    pub pairs: Option<Vec<(usize, usize)>>,
    pub random_seeds: usize,
    pub seed: u64,
    /// Fall back to fitting `Λ` of the unmatched exact eigenvectors.
    pub lambda_fit: bool,
    pub tol: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        MatchOptions {
            pairs: None,
            random_seeds: 400,
            seed: 1,
            lambda_fit: true,
            tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatchedLevel {
    pub exact_energy: f64,
    pub electrons: usize,
    pub solution: Option<BaeSolution>,
}

#[derive(Debug, Clone)]
pub struct MatchReport {
    pub levels: Vec<MatchedLevel>,
}

impl MatchReport {
    pub fn unmatched(&self) -> Vec<usize> {
        self.levels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.solution.is_none())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn matched_count(&self) -> usize {
        self.levels.len() - self.unmatched().len()
    }

    pub fn complete(&self) -> bool {
        self.unmatched().is_empty()
    }

    /// Largest `|E_BAE - E_ED|` over matched levels.
    pub fn max_energy_error(&self) -> f64 {
        self.levels
            .iter()
            .filter_map(|l| l.solution.as_ref().map(|s| (s.energy - l.exact_energy).abs()))
            .fold(0.0, f64::max)
    }
}

/// Summary line per level, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct LevelSummary {
    pub index: usize,
    pub exact_energy: f64,
    pub electrons: usize,
    pub bae_energy: Option<f64>,
    pub family: Option<&'static str>,
}

impl MatchReport {
    pub fn summaries(&self) -> Vec<LevelSummary> {
        self.levels
            .iter()
            .enumerate()
            .map(|(index, l)| LevelSummary {
                index,
                exact_energy: l.exact_energy,
                electrons: l.electrons,
                bae_energy: l.solution.as_ref().map(|s| s.energy),
                family: l.solution.as_ref().map(|s| s.family),
            })
            .collect()
    }
}

/// Charge roots count electrons; with `h ≠ 0` the spin roots do too, with
/// `h = 0` any `M̄ <= M` may occur.
fn default_pairs(sites: usize, inhomogeneous: bool) -> Vec<(usize, usize)> {
    (0..=sites)
        .flat_map(|n| {
            let spins: Vec<usize> = if inhomogeneous { vec![n] } else { (0..=n).collect() };
            spins.into_iter().map(move |s| (n, s))
        })
        .collect()
}

fn take_best(pool: &mut Vec<BaeSolution>, electrons: usize, energy: f64, tol: f64) -> Option<BaeSolution> {
    let pos = pool
        .iter()
        .enumerate()
        .filter(|(_, s)| s.roots.m() == electrons && (s.energy - energy).abs() <= tol)
        .min_by(|a, b| (a.1.energy - energy).abs().total_cmp(&(b.1.energy - energy).abs()))
        .map(|(i, _)| i)?;
    Some(pool.remove(pos))
}

/// Pairs every exact eigenvalue with a distinct Bethe configuration. `L <= 3`.
pub fn match_against_exact(spec: &LatticeSpec, opts: &MatchOptions) -> Result<MatchReport> {
    if spec.sites() > 3 {
        return Err(Error::validation(format!("matching is limited to L <= 3, got {}", spec.sites())));
    }
    let inhomogeneous = !spec.params().is_diagonalizable_pair();
    let pairs = opts.pairs.clone().unwrap_or_else(|| default_pairs(spec.sites(), inhomogeneous));
    let newton = NewtonOptions::default();
    let exact = eigensystem(spec)?;

    let mut pool = Vec::new();
    for (i, &(m, mbar)) in pairs.iter().enumerate() {
        let strategy = SeedStrategy::Random {
            count: opts.random_seeds * (m + mbar).max(1),
            seed: opts.seed.wrapping_add(1000 * i as u64),
        };
        pool.extend(solve_nested_bae(spec, m, mbar, &[strategy], &newton)?.solutions);
    }

    let mut levels: Vec<MatchedLevel> = exact
        .iter()
        .map(|l| MatchedLevel {
            exact_energy: l.energy,
            electrons: l.electrons,
            solution: take_best(&mut pool, l.electrons, l.energy, opts.tol),
        })
        .collect();

    if opts.lambda_fit {
        for (level, state) in levels.iter_mut().zip(&exact) {
            if level.solution.is_some() {
                continue;
            }
            for &(m, mbar) in pairs.iter().filter(|p| p.0 == state.electrons) {
                let strategy = SeedStrategy::LambdaFit {
                    vectors: vec![state.vector.clone()],
                    starts: 200,
                    seed: opts.seed,
                };
                let found = solve_nested_bae(spec, m, mbar, &[strategy], &newton)?.solutions;
                let mut candidates: Vec<BaeSolution> = found;
                if let Some(s) = take_best(&mut candidates, state.electrons, state.energy, opts.tol) {
                    level.solution = Some(s);
                    break;
                }
            }
        }
    }
    Ok(MatchReport { levels })
}
