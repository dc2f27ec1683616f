//! Three-level parameters and the map from the fermion-impurity couplings.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrability::AcsCouplings;
use crate::su3::{detuning_shift, jacobi, ChargeSector};

/// Detunings, tunnelling, phase and ohmic bath parameters (`ħ = 1`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QdsParams {
    pub eps3: f64,
    pub eps8: f64,
    pub delta: f64,
    pub zeta: f64,
    pub alpha: f64,
    pub omega_c: f64,
}

impl QdsParams {
    pub fn validated(self) -> Result<Self> {
        let all = [self.eps3, self.eps8, self.delta, self.zeta, self.alpha, self.omega_c];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.alpha < 0.0 {
            return Err(Error::InvalidParameter(format!("alpha must be ≥ 0, got {}", self.alpha)));
        }
        if self.omega_c <= 0.0 {
            return Err(Error::InvalidParameter(format!("omega_c must be > 0, got {}", self.omega_c)));
        }
        Ok(self)
    }
}

/// `1 − J∥L/(2πv_F)`, whose square is the ohmic coupling.
pub fn coupling_factor(c: &AcsCouplings) -> f64 {
    1.0 - c.j_par * c.length_l / (TAU * c.v_fermi)
}

/// Detunings from the Jacobi combinations of the fields plus the
/// charge-sector shift; `Δ = −J⊥L/(2πa)`; `ζ = ζ23 − ζ13 + ζ12`;
/// `α = (1 − J∥L/2πv_F)²`; `ωc = v_F/a`.
pub fn map_acs_to_qds(c: &AcsCouplings, sector: &ChargeSector) -> Result<QdsParams> {
    let c = c.validated()?;
    let (h3, h8, _) = jacobi([c.h1, c.h2, c.h3]);
    let (d3, d8) = detuning_shift(sector);
    QdsParams {
        eps3: h3 + d3,
        eps8: h8 + d8,
        delta: -c.j_perp * c.length_l / (TAU * c.reg_a),
        zeta: c.phase_flux(),
        alpha: coupling_factor(&c).powi(2),
        omega_c: c.v_fermi / c.reg_a,
    }
    .validated()
}
