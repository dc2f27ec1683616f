//! Verification and simulation toolkit for an exactly solvable
//! three-level dissipative system obtained from an anisotropic
//! three-component fermion-impurity model.
//!
//! * [`su3`]: Gell-Mann algebra, Jacobi coordinates, charge-sector shifts.
//! * [`integrability`]: scattering matrix, trigonometric R-matrix,
//!   Yang-Baxter check and coupling reparametrisation.
//! * [`fermi_boson`]: finite-window bosonisation laboratory.
//! * [`qds`]: three-level Hamiltonian with discretized ohmic baths,
//!   spectral-density and conjugation checks, and time evolution.

pub mod error;
pub mod fermi_boson;
pub mod integrability;
pub mod linalg;
pub mod qds;
pub mod su3;

pub use error::{Error, Result};
