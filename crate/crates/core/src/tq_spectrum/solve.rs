//! Multi-start solution of the nested Bethe equations.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::fit::fit_roots;
use super::newton::{newton, NewtonOptions};
use super::relation::{energy_from_roots, Coeffs};
use super::roots::canonical_v;
use super::BetheRoots;
use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, TransferMatrix};
use crate::params::{BoundaryParams, FieldSign, RawParams, C64};

/// Configurations closer than this, root by root, are the same solution.
pub const DEDUPE_TOL: f64 = 1e-6;
/// Roots this close to a degenerate point are rejected as spurious.
const DEGENERATE_TOL: f64 = 1e-6;

/// Where starting points come from.
#[derive(Debug, Clone)]
pub enum SeedStrategy {
    /// Random points, mixing the line `Re v = -η/2`, the real axis and the
    /// disks `|v + η/2| <= 3`, `|λ| <= 3`.
    Random { count: usize, seed: u64 },
    /// Solve at the parallel-field point and continue in the right polar angle.
    Homotopy { count: usize, seed: u64, steps: usize },
    /// Fixed starting configurations, e.g. read from a file.
    Explicit(Vec<BetheRoots>),
    /// Fit `Q` and `Q1` to `<ψ|t(u)|ψ>` for each given state vector.
    LambdaFit { vectors: Vec<DVector<C64>>, starts: usize, seed: u64 },
}

impl SeedStrategy {
    pub fn family(&self) -> &'static str {
        match self {
            SeedStrategy::Random { .. } => "random",
            SeedStrategy::Homotopy { .. } => "homotopy",
            SeedStrategy::Explicit(_) => "explicit",
            SeedStrategy::LambdaFit { .. } => "lambda_fit",
        }
    }
}

/// A converged, admissible configuration.
#[derive(Debug, Clone)]
pub struct BaeSolution {
    pub roots: BetheRoots,
    pub energy: f64,
    pub residual: f64,
    pub family: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyStats {
    pub family: &'static str,
    pub attempts: usize,
    pub converged: usize,
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solutions: Vec<BaeSolution>,
    pub families: Vec<FamilyStats>,
}

fn near(a: C64, b: C64) -> bool {
    (a - b).norm() < DEGENERATE_TOL * (1.0 + a.norm())
}

/// Rejects root sets that satisfy the equations only through a degeneracy.
pub fn is_admissible(roots: &BetheRoots) -> bool {
    let eta = roots.params.eta;
    let v = &roots.v;
    let l = &roots.lam;
    let half = C64::new(-eta / 2.0, 0.0);
    if v.iter().any(|&x| near(x, half) || near(x, C64::new(0.0, 0.0)) || near(x, C64::new(-eta, 0.0))) {
        return false;
    }
    // λ = ±η/2 empties the spin equation through Q1(λ - η) = 0
    if l.iter().any(|&x| x.norm() < DEGENERATE_TOL || near(x, -half) || near(x, half)) {
        return false;
    }
    // λ = ±v or ±(v + η): Q(λ - η) and Q1 share a zero and every term vanishes
    for &x in l {
        for &y in v {
            if near(x, y) || near(x, -y) || near(x, y + eta) || near(x, -y - eta) {
                return false;
            }
        }
    }
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if near(v[i], v[j]) || near(v[i], -v[j] - eta) {
                return false;
            }
        }
    }
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            if near(l[i], l[j]) || near(l[i], -l[j]) {
                return false;
            }
        }
    }
    v.iter().chain(l).all(|z| z.is_finite())
}

pub(crate) fn random_start(rng: &mut ChaCha8Rng, m: usize, mbar: usize, eta: f64) -> Vec<C64> {
    let disk = |rng: &mut ChaCha8Rng| C64::from_polar(3.0 * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
    let mut z = Vec::with_capacity(m + mbar);
    while z.len() < m {
        if m - z.len() >= 2 && rng.random::<f64>() < 0.25 {
            // complex-conjugate pair off the line Re v = -η/2
            let c = C64::new(rng.random_range(-1.5..1.0), rng.random_range(0.0..2.0));
            z.push(c);
            z.push(c.conj());
            continue;
        }
        let r: f64 = rng.random();
        z.push(if r < 0.4 {
            C64::new(-eta / 2.0, rng.random_range(-3.0..3.0))
        } else if r < 0.7 {
            C64::new(rng.random_range(-3.0..2.0), 0.0)
        } else {
            disk(rng) - eta / 2.0
        });
    }
    let mut spins = 0;
    while spins < mbar {
        if mbar - spins >= 2 && rng.random::<f64>() < 0.2 {
            let c = C64::new(rng.random_range(0.0..2.5), rng.random_range(0.0..2.5));
            z.push(c);
            z.push(c.conj());
            spins += 2;
            continue;
        }
        spins += 1;
        let r: f64 = rng.random();
        z.push(if r < 0.4 {
            C64::new(rng.random_range(-3.0..3.0), 0.0)
        } else if r < 0.7 {
            C64::new(0.0, rng.random_range(-3.0..3.0))
        } else {
            disk(rng)
        });
    }
    z
}

fn finish(z: &[C64], m: usize, residual: f64, params: BoundaryParams, sites: usize, family: &'static str) -> Option<BaeSolution> {
    let roots = BetheRoots::new(z[..m].to_vec(), z[m..].to_vec(), params, sites).canonicalized();
    if !is_admissible(&roots) {
        return None;
    }
    let energy = energy_from_roots(&roots).ok()?;
    Some(BaeSolution {
        roots,
        energy,
        residual,
        family,
    })
}

fn polish(
    z0: &[C64],
    m: usize,
    params: BoundaryParams,
    sites: usize,
    opts: &NewtonOptions,
    family: &'static str,
) -> Option<BaeSolution> {
    let k = Coeffs::new(&params, sites);
    let run = newton(z0, m, &k, opts)?;
    if !run.accepted {
        return None;
    }
    finish(&run.z, m, run.residual, params, sites, family)
}

fn random_family(spec: &LatticeSpec, m: usize, mbar: usize, count: usize, seed: u64, opts: &NewtonOptions) -> Vec<Option<BaeSolution>> {
    let params = *spec.params();
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64));
            let z0 = random_start(&mut rng, m, mbar, params.eta);
            polish(&z0, m, params, spec.sites(), opts, "random")
        })
        .collect()
}

/// The zero-`h` point reached by rotating the right field onto the left one
/// (or its opposite for `ε = -1`).
fn degenerate_counterpart(params: &BoundaryParams) -> Result<BoundaryParams> {
    let raw = params.raw();
    let moved = match params.epsilon {
        FieldSign::Plus => RawParams {
            theta_prime: raw.theta,
            phi_prime: raw.phi,
            ..raw
        },
        FieldSign::Minus => RawParams {
            theta_prime: std::f64::consts::PI - raw.theta,
            phi_prime: raw.phi + std::f64::consts::PI,
            ..raw
        },
    };
    BoundaryParams::new(moved)
}

fn homotopy_family(
    spec: &LatticeSpec,
    m: usize,
    mbar: usize,
    count: usize,
    seed: u64,
    steps: usize,
    opts: &NewtonOptions,
) -> Result<Vec<Option<BaeSolution>>> {
    let target = *spec.params();
    let start = degenerate_counterpart(&target)?;
    let start_spec = LatticeSpec::new(spec.sites(), start)?;
    let starts = dedupe(random_family(&start_spec, m, mbar, count, seed, opts).into_iter().flatten().collect());
    let raw0 = start.raw();
    let raw1 = target.raw();
    let steps = steps.max(1);
    let path: Vec<BoundaryParams> = (1..=steps)
        .map(|s| {
            let t = s as f64 / steps as f64;
            BoundaryParams::new(RawParams {
                theta_prime: raw0.theta_prime + t * (raw1.theta_prime - raw0.theta_prime),
                phi_prime: raw0.phi_prime + t * (raw1.phi_prime - raw0.phi_prime),
                ..raw1
            })
        })
        .collect::<Result<_>>()?;
    Ok(starts
        .into_par_iter()
        .map(|sol| {
            let mut z: Vec<C64> = sol.roots.v.iter().chain(&sol.roots.lam).copied().collect();
            let mut last = None;
            for p in &path {
                let run = newton(&z, m, &Coeffs::new(p, spec.sites()), opts)?;
                if !run.accepted {
                    return None;
                }
                z = run.z;
                last = Some(run.residual);
            }
            finish(&z, m, last?, target, spec.sites(), "homotopy")
        })
        .collect())
}

/// `(u, <ψ|t(u)|ψ>)` on a circle of radius 0.7 around the origin.
pub fn lambda_samples(spec: &LatticeSpec, psi: &DVector<C64>, count: usize) -> Vec<(C64, C64)> {
    let tm = TransferMatrix::new(spec);
    (0..count)
        .into_par_iter()
        .map(|i| {
            // several radii keep roots far from the origin well resolved
            let radius = SAMPLE_RADII[i % SAMPLE_RADII.len()];
            let u = C64::from_polar(radius, std::f64::consts::TAU * (i as f64 + 0.3) / count as f64);
            (u, tm.expectation(u, psi))
        })
        .collect()
}

const SAMPLE_RADII: [f64; 3] = [0.7, 2.5, 6.0];

/// Charge roots may move this far between the fit and the polished solution.
const REFIT_TOL: f64 = 1e-3;

fn sorted_canonical_v(v: &[C64], eta: f64) -> Vec<C64> {
    let mut out: Vec<C64> = v.iter().map(|&x| canonical_v(x, eta)).collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

fn lambda_fit_family(
    spec: &LatticeSpec,
    m: usize,
    mbar: usize,
    vectors: &[DVector<C64>],
    starts: usize,
    seed: u64,
    opts: &NewtonOptions,
) -> Vec<Option<BaeSolution>> {
    let params = *spec.params();
    let k = Coeffs::new(&params, spec.sites());
    let count = 4 * spec.sites() + 3 * (m + mbar) + 8;
    vectors
        .iter()
        .enumerate()
        .map(|(i, psi)| {
            let samples = lambda_samples(spec, psi, count);
            let (v, lam, _) = fit_roots(&samples, m, mbar, k, starts, seed.wrapping_add(i as u64))?;
            let z0: Vec<C64> = v.iter().chain(&lam).copied().collect();
            if let Some(found) = polish(&z0, m, params, spec.sites(), opts, "lambda_fit") {
                return Some(found);
            }
            // Spin roots are often poorly fixed by the fit; keep the charge
            // roots and restart the spin part.
            let target = sorted_canonical_v(&v, params.eta);
            (0..starts.max(1))
                .into_par_iter()
                .filter_map(|j| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_f491_4f6c_dd1d).wrapping_add(j as u64));
                    let stretch = rng.random_range(1.0..3.0);
                    let spins: Vec<C64> = random_start(&mut rng, 0, mbar, params.eta).into_iter().map(|x| x * stretch).collect();
                    let z0: Vec<C64> = v.iter().chain(&spins).copied().collect();
                    let s = polish(&z0, m, params, spec.sites(), opts, "lambda_fit")?;
                    let got = sorted_canonical_v(&s.roots.v, params.eta);
                    let drift = got.iter().zip(&target).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                    (drift < REFIT_TOL).then_some((j, s))
                })
                .min_by_key(|(j, _)| *j)
                .map(|(_, s)| s)
        })
        .collect()
}

/// Keeps the first of every group of equivalent configurations, in input order.
pub fn dedupe(solutions: Vec<BaeSolution>) -> Vec<BaeSolution> {
    let mut out: Vec<BaeSolution> = Vec::new();
    for s in solutions {
        if !out.iter().any(|o| o.roots.same_as(&s.roots, DEDUPE_TOL)) {
            out.push(s);
        }
    }
    out
}

/// Solves the nested Bethe equations with `M` charge and `M̄` spin roots.
///
/// Seeds from all strategies are polished by Newton, filtered for spurious
/// degeneracies and deduplicated. The result is sorted by energy and does not
/// depend on thread scheduling.
pub fn solve_nested_bae(
    spec: &LatticeSpec,
    m: usize,
    mbar: usize,
    strategies: &[SeedStrategy],
    opts: &NewtonOptions,
) -> Result<SolveReport> {
    let l = spec.sites();
    if m > l || mbar > l {
        return Err(Error::validation(format!("M = {m}, Mbar = {mbar} exceed L = {l}")));
    }
    let params = *spec.params();
    if m + mbar == 0 {
        let roots = BetheRoots::empty(params, l);
        return Ok(SolveReport {
            solutions: vec![BaeSolution {
                roots,
                energy: 0.0,
                residual: 0.0,
                family: "explicit",
            }],
            families: vec![],
        });
    }
    let mut all = Vec::new();
    let mut families = Vec::new();
    for strategy in strategies {
        let results: Vec<Option<BaeSolution>> = match strategy {
            SeedStrategy::Random { count, seed } => random_family(spec, m, mbar, *count, *seed, opts),
            SeedStrategy::Homotopy { count, seed, steps } => homotopy_family(spec, m, mbar, *count, *seed, *steps, opts)?,
            SeedStrategy::Explicit(seeds) => seeds
                .iter()
                .filter(|s| s.m() == m && s.mbar() == mbar)
                .map(|s| {
                    let z0: Vec<C64> = s.v.iter().chain(&s.lam).copied().collect();
                    polish(&z0, m, params, l, opts, "explicit")
                })
                .collect(),
            SeedStrategy::LambdaFit { vectors, starts, seed } => {
                lambda_fit_family(spec, m, mbar, vectors, *starts, *seed, opts)
            }
        };
        families.push(FamilyStats {
            family: strategy.family(),
            attempts: results.len(),
            converged: results.iter().filter(|r| r.is_some()).count(),
        });
        all.extend(results.into_iter().flatten());
    }
    let mut solutions = dedupe(all);
    solutions.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(SolveReport { solutions, families })
}
