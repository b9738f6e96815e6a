//! Exact solution of the one-dimensional supersymmetric t-J model with
//! unparallel boundary fields.
//!
//! The crate is layered bottom-up: [`graded_algebra`] supplies the su(1|2)
//! R- and K-matrices, [`lattice`] builds the Hamiltonian and transfer matrix
//! and diagonalizes them, [`tq_spectrum`] solves the nested Bethe ansatz
//! equations of the inhomogeneous T-Q relation, [`ground_state`] handles the
//! large-L ground state, [`thermo`] the thermodynamic limit and
//! [`extrapolate`] the finite-size extrapolation.

pub mod error;
pub mod graded_algebra;
pub mod lattice;
pub mod tq_spectrum;
pub mod extrapolate;
pub mod ground_state;
pub mod quadrature;
pub mod thermo;
pub mod params;
pub mod presets;

pub use error::{Error, Result};
pub use params::{BoundaryParams, FieldSign, KCouplings, RawParams, C64};
