//! The open chain itself: Hamiltonian, transfer matrix and exact diagonalization.
//!
//! Local states are `0 = empty`, `1 = spin down`, `2 = spin up`, matching the
//! graded basis of [`crate::graded_algebra`]. The global index treats site 1
//! as the most significant base-3 digit.

mod eigen;
mod hamiltonian;
mod transfer;

pub use eigen::{
    dense_hermitian_eigen, eigensystem, exact_spectrum, lanczos_ground, sector_ground_states, Level,
    SectorGround, SpectrumRecord, DENSE_SITE_LIMIT, ITERATIVE_SITE_LIMIT,
};
pub use hamiltonian::{
    build_hamiltonian, build_hamiltonian_with, hamiltonian_entries, number_commutator_residual,
    number_operator, sector_hamiltonian, BasisOrdering, Sector,
};
pub use transfer::{
    build_transfer_matrix, hamiltonian_identity_residual, hamiltonian_identity_residual_with,
    transfer_commutator_residual, TransferMatrix,
};

use crate::error::{Error, Result};
use crate::params::BoundaryParams;

/// Chain length together with its boundary parameters.
#[derive(Debug, Clone, Copy)]
pub struct LatticeSpec {
    sites: usize,
    params: BoundaryParams,
}

impl LatticeSpec {
    pub fn new(sites: usize, params: BoundaryParams) -> Result<Self> {
        if sites < 2 {
            return Err(Error::validation(format!("need at least 2 sites, got {sites}")));
        }
        if sites > 19 {
            return Err(Error::validation(format!("{sites} sites overflow the state index")));
        }
        Ok(LatticeSpec { sites, params })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn params(&self) -> &BoundaryParams {
        &self.params
    }

    /// `3^L`
    pub fn dim(&self) -> usize {
        crate::graded_algebra::dim(self.sites)
    }
}

/// Number of occupied sites in a basis state.
pub fn electrons(mut state: usize, sites: usize) -> usize {
    let mut n = 0;
    for _ in 0..sites {
        if state % 3 != 0 {
            n += 1;
        }
        state /= 3;
    }
    n
}
