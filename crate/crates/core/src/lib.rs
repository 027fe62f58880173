//! Analytic evolution for one-dimensional tight-binding couplers with
//! complex couplings, and the quantum-optics machinery built on top:
//! Gaussian covariance evolution, photon-added/subtracted Wigner
//! functions, two-photon correlation matrices, combinatorial expansion
//! coefficients, and a truncated-Fock brute-force oracle for validation
//! and benchmarking.

pub mod bench;
pub mod bessel;
pub mod correlations;
pub mod error;
pub mod fock;
pub mod lattice;
pub mod gaussian;
pub mod propagator;
pub mod sequences;
pub mod wigner;

pub use error::{Error, Result};
pub use lattice::{build_coupling_matrix, phase_table, CouplingMatrix, LatticeSpec, PhaseTable, Topology};
pub use propagator::{
    auto_transfer, circulant_apply, closed_transfer_bessel, closed_transfer_trig, exp_oracle,
    open_transfer, BesselSeriesConfig, Provenance, TransferMatrix,
};
