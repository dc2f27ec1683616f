//! Three-level dissipative system with two ohmic baths.

mod bath;
mod conjugation;
mod evolve;
mod hamiltonian;
mod params;
mod spectral;

pub use bath::{build_bath, coupling_identity_residual, default_spacing, ohmic_bath, BathDiscretization};
pub use conjugation::{
    channel_deviation, channel_operators, conjugation_check, displaced_oscillator_deviation, ChannelModes,
    ConjugationReport, DENSE_CAP,
};
pub use evolve::{evolve, SystemBathState, Trajectory, TrajectoryRow, CSV_HEADER};
pub use hamiltonian::{
    assemble_hamiltonian, assemble_hamiltonian_with_cap, impurity_block, QdsLayout, DEFAULT_DIM_CAP,
};
pub use params::{coupling_factor, map_acs_to_qds, QdsParams};
pub use spectral::{
    continuum_integral, convergence_order, gauss_legendre, integrate, spectral_density_residual, GaussianTest,
};
