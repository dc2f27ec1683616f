//! Finite-window constructive bosonisation.
//!
//! Chiral fermions on slots `n_min..=n_max` (momentum `2πn/L`), the density
//! bilinears `b_k`, and residual checks for the boson algebra, the density
//! and kinetic identities and the regularised two-point function.

mod bilinear;
mod identities;
mod space;

pub use bilinear::{
    basis_vector, boson_bilinear, boson_mode, fock_norm, hop, number_bilinear, Bilinear, FockVector, Mode,
};
pub use identities::{
    breakdown_probe, commutator_residual, density_identity_residual, density_operators, flavor_commutator_residual,
    kinetic_identity_fit, lowering_commutator_residual, number_conservation_residual, two_point_compare, KineticFit,
    TwoPointComparison,
};
pub use space::{BasisSelection, FermionFockSpace, MomentumWindow, ValiditySector, DEFAULT_ENUMERATION_CAP, MAX_MODES};

/// Full basis over `window` with the default enumeration cap.
pub fn build_space(window: MomentumWindow, flavors: usize) -> crate::Result<FermionFockSpace> {
    FermionFockSpace::build(window, flavors, BasisSelection::Full)
}
