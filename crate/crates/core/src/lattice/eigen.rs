use nalgebra::{DMatrix, DVector, SymmetricEigen};
use nalgebra_sparse::CsrMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{sector_hamiltonian, LatticeSpec, Sector};
use crate::error::{Error, Result};
use crate::params::C64;

/// Largest chain for which full spectra are computed densely.
pub const DENSE_SITE_LIMIT: usize = 7;
/// Largest chain for which the iterative ground-state solver is offered.
pub const ITERATIVE_SITE_LIMIT: usize = 12;
/// Sector dimension above which Lanczos replaces dense diagonalization.
const DENSE_SECTOR_LIMIT: usize = 1500;
const KRYLOV_DIM: usize = 100;
const MAX_RESTARTS: usize = 60;
const LANCZOS_SEED: u64 = 0x5eed;

/// Sorted eigenvalues and matching eigenvector columns of a Hermitian matrix.
pub fn dense_hermitian_eigen(m: DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

fn dot(a: &DVector<C64>, b: &DVector<C64>) -> C64 {
    a.dotc(b)
}

/// Lowest eigenpair of a Hermitian sparse matrix by restarted Lanczos with
/// full reorthogonalization.
///
/// Converged when `|H x - θ x| <= tol * max(1, |θ|)`.
pub fn lanczos_ground(h: &CsrMatrix<C64>, tol: f64, seed: u64) -> Result<(f64, DVector<C64>)> {
    let n = h.nrows();
    if n == 0 {
        return Err(Error::validation("empty matrix"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DVector::from_fn(n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    x /= C64::new(x.norm(), 0.0);
    let m = KRYLOV_DIM.min(n);
    let mut last_residual = f64::INFINITY;
    for _ in 0..MAX_RESTARTS {
        let mut basis: Vec<DVector<C64>> = vec![x.clone()];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        for k in 0..m {
            let mut w = h * &basis[k];
            let a = dot(&basis[k], &w).re;
            alpha.push(a);
            w.axpy(C64::new(-a, 0.0), &basis[k], C64::new(1.0, 0.0));
            if k > 0 {
                w.axpy(C64::new(-beta[k - 1], 0.0), &basis[k - 1], C64::new(1.0, 0.0));
            }
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    w.axpy(-c, v, C64::new(1.0, 0.0));
                }
            }
            let b = w.norm();
            if k + 1 == m || b < 1e-13 {
                break;
            }
            beta.push(b);
            basis.push(w / C64::new(b, 0.0));
        }
        let k = alpha.len();
        let t = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                alpha[i]
            } else if i + 1 == j {
                beta[i]
            } else if j + 1 == i {
                beta[j]
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(t);
        let lowest = eig.eigenvalues.imin();
        let theta = eig.eigenvalues[lowest];
        let mut ritz = DVector::zeros(n);
        for (i, v) in basis.iter().take(k).enumerate() {
            ritz.axpy(C64::new(eig.eigenvectors[(i, lowest)], 0.0), v, C64::new(1.0, 0.0));
        }
        ritz /= C64::new(ritz.norm(), 0.0);
        let r = (h * &ritz - &ritz * C64::new(theta, 0.0)).norm();
        last_residual = r;
        if r <= tol * theta.abs().max(1.0) {
            return Ok((theta, ritz));
        }
        x = ritz;
    }
    Err(Error::NoConvergence {
        iterations: MAX_RESTARTS * m,
        residual: last_residual,
    })
}

/// Lowest state of one electron-number sector.
#[derive(Debug, Clone)]
pub struct SectorGround {
    pub electrons: usize,
    pub energy: f64,
    /// Normalized eigenvector in the full `3^L` basis.
    pub vector: DVector<C64>,
}

fn sector_lowest(sector: &Sector) -> Result<(f64, DVector<C64>)> {
    if sector.dim() <= DENSE_SECTOR_LIMIT {
        let (vals, vecs) = dense_hermitian_eigen(sector.to_dense());
        Ok((vals[0], vecs.column(0).into_owned()))
    } else {
        lanczos_ground(&sector.matrix, 1e-11, LANCZOS_SEED + sector.electrons as u64)
    }
}

/// Ground energy and vector of every sector `N = 0..=L`, in order of `N`.
pub fn sector_ground_states(spec: &LatticeSpec) -> Result<Vec<SectorGround>> {
    if spec.sites() > ITERATIVE_SITE_LIMIT {
        return Err(Error::validation(format!(
            "exact diagonalization limited to L <= {ITERATIVE_SITE_LIMIT}, got {}",
            spec.sites()
        )));
    }
    let dim = spec.dim();
    (0..=spec.sites())
        .into_par_iter()
        .map(|n| {
            let sector = sector_hamiltonian(spec, n)?;
            let (energy, local) = sector_lowest(&sector)?;
            Ok(SectorGround {
                electrons: n,
                energy,
                vector: sector.embed_vector(&local, dim),
            })
        })
        .collect()
}

/// One eigenstate of the full Hamiltonian.
#[derive(Debug, Clone)]
pub struct Level {
    pub energy: f64,
    pub electrons: usize,
    pub vector: DVector<C64>,
}

/// All `3^L` eigenstates, sorted by energy then electron number. `L <= 7`.
pub fn eigensystem(spec: &LatticeSpec) -> Result<Vec<Level>> {
    if spec.sites() > DENSE_SITE_LIMIT {
        return Err(Error::validation(format!(
            "full spectra limited to L <= {DENSE_SITE_LIMIT}, got {}",
            spec.sites()
        )));
    }
    let dim = spec.dim();
    let per_sector: Vec<Vec<Level>> = (0..=spec.sites())
        .into_par_iter()
        .map(|n| {
            let sector = sector_hamiltonian(spec, n)?;
            let (vals, vecs) = dense_hermitian_eigen(sector.to_dense());
            Ok(vals
                .into_iter()
                .enumerate()
                .map(|(k, energy)| Level {
                    energy,
                    electrons: n,
                    vector: sector.embed_vector(&vecs.column(k).into_owned(), dim),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut levels: Vec<Level> = per_sector.into_iter().flatten().collect();
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.electrons.cmp(&b.electrons)));
    Ok(levels)
}

/// Lowest part of the spectrum with electron-number labels.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRecord {
    pub energies: Vec<f64>,
    pub electron_numbers: Vec<usize>,
    #[serde(skip)]
    pub ground_vector: Option<DVector<C64>>,
}

impl SpectrumRecord {
    pub fn ground_vector_available(&self) -> bool {
        self.ground_vector.is_some()
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }
}

/// The lowest `levels` eigenvalues.
///
/// Up to `L = 7` any number of levels is available. From `L = 8` to `12` only
/// the ground level is computed (the lowest of the per-sector Lanczos minima).
pub fn exact_spectrum(spec: &LatticeSpec, levels: usize) -> Result<SpectrumRecord> {
    if levels == 0 {
        return Err(Error::validation("levels must be at least 1"));
    }
    if spec.sites() <= DENSE_SITE_LIMIT {
        let mut all = eigensystem(spec)?;
        all.truncate(levels);
        let ground = all[0].vector.clone();
        return Ok(SpectrumRecord {
            energies: all.iter().map(|l| l.energy).collect(),
            electron_numbers: all.iter().map(|l| l.electrons).collect(),
            ground_vector: Some(ground),
        });
    }
    if levels > 1 {
        return Err(Error::validation(format!(
            "beyond L = {DENSE_SITE_LIMIT} only the ground level is available"
        )));
    }
    let sectors = sector_ground_states(spec)?;
    let best = sectors
        .into_iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("at least one sector");
    Ok(SpectrumRecord {
        energies: vec![best.energy],
        electron_numbers: vec![best.electrons],
        ground_vector: Some(best.vector),
    })
}
