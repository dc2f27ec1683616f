//! Discretized two-channel ohmic baths on the mode ladder `ωn = nΔω`.

use std::f64::consts::TAU;

use serde::Serialize;

use super::params::{coupling_factor, QdsParams};
use crate::error::{Error, Result};
use crate::integrability::AcsCouplings;

/// Shared mode list of the λ3 and λ8 channels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BathDiscretization {
    omegas: Vec<f64>,
    couplings: Vec<f64>,
    n_max: usize,
}

impl BathDiscretization {
    pub fn new(omegas: Vec<f64>, couplings: Vec<f64>, n_max: usize) -> Result<Self> {
        if omegas.len() != couplings.len() {
            return Err(Error::DimensionMismatch { expected: omegas.len(), got: couplings.len() });
        }
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be ≥ 1".into()));
        }
        if omegas.iter().chain(&couplings).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("bath data must be finite".into()));
        }
        if omegas.first().is_some_and(|&w| w <= 0.0) || omegas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("frequencies must be positive and increasing".into()));
        }
        Ok(Self { omegas, couplings, n_max })
    }

    pub fn n_modes(&self) -> usize {
        self.omegas.len()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn modes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.omegas.iter().copied().zip(self.couplings.iter().copied())
    }

    pub fn with_n_max(mut self, n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter("n_max must be ≥ 1".into()));
        }
        self.n_max = n_max;
        Ok(self)
    }
}

/// Mode ladder `ωn = 2πv_F n/L` with
/// `C_k = −v_F √(2πk/L) e^{−ωk/2ωc} (1 − J∥L/2πv_F)`, `k = 2πn/L`.
pub fn build_bath(n_modes: usize, c: &AcsCouplings, n_max: usize) -> Result<BathDiscretization> {
    if n_modes < 1 {
        return Err(Error::InvalidParameter("n_modes must be ≥ 1".into()));
    }
    let c = c.validated()?;
    let omega_c = c.v_fermi / c.reg_a;
    let factor = coupling_factor(&c);
    let (omegas, couplings) = (1..=n_modes)
        .map(|n| {
            let k = TAU * n as f64 / c.length_l;
            let omega = c.v_fermi * k;
            let ck = -c.v_fermi * (TAU * k / c.length_l).sqrt() * (-omega / (2.0 * omega_c)).exp() * factor;
            (omega, ck)
        })
        .unzip();
    BathDiscretization::new(omegas, couplings, n_max)
}

/// Ladder `ωn = nΔω` with `C_n = −√(α Δω ωn e^{−ωn/ωc})`, the same ladder
/// as [`build_bath`] with `v_F = 1`, `a = 1/ωc`, `L = 2π/Δω`.
pub fn ohmic_bath(q: &QdsParams, n_modes: usize, d_omega: f64, n_max: usize) -> Result<BathDiscretization> {
    let q = q.validated()?;
    if n_modes < 1 {
        return Err(Error::InvalidParameter("n_modes must be ≥ 1".into()));
    }
    if !(d_omega.is_finite() && d_omega > 0.0) {
        return Err(Error::InvalidParameter(format!("d_omega must be positive, got {d_omega}")));
    }
    let (omegas, couplings) = (1..=n_modes)
        .map(|n| {
            let w = n as f64 * d_omega;
            (w, -(q.alpha * d_omega * w * (-w / q.omega_c).exp()).sqrt())
        })
        .unzip();
    BathDiscretization::new(omegas, couplings, n_max)
}

/// Default ladder spacing: modes evenly fill `(0, 5ωc]`.
pub fn default_spacing(q: &QdsParams, n_modes: usize) -> f64 {
    5.0 * q.omega_c / n_modes.max(1) as f64
}

/// Max relative deviation of `C_k² L/(2πv_F)` from `α ωk e^{−ωk/ωc}`
/// (absolute where the right side vanishes).
pub fn coupling_identity_residual(b: &BathDiscretization, c: &AcsCouplings) -> f64 {
    let alpha = coupling_factor(c).powi(2);
    let omega_c = c.v_fermi / c.reg_a;
    b.modes()
        .map(|(w, ck)| {
            let lhs = ck * ck * c.length_l / (TAU * c.v_fermi);
            let rhs = alpha * w * (-w / omega_c).exp();
            let d = (lhs - rhs).abs();
            if rhs == 0.0 { d } else { d / rhs }
        })
        .fold(0.0, f64::max)
}
