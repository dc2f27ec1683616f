//! Unitary conjugation of the free boson term and the displaced-oscillator
//! shift, checked on small truncated spaces with dense exponentials.
//!
//! The three channels `A ∈ {3, 8, 0}` carry commuting diagonal impurity
//! operators and independent bosons, so `U = Π_A exp(i S_A φ_A)` factorizes
//! and each channel is checked on `3 ⊗ (n_max+1)^{n_modes}`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use serde::Serialize;

use super::bath::build_bath;
use crate::error::{Error, Result};
use crate::integrability::AcsCouplings;
use crate::linalg::dense::{annihilation, max_abs_diff};
use crate::linalg::{expm, hermitian_eigenvalues, kron, C64};

/// Largest dense dimension handled here.
pub const DENSE_CAP: usize = 1024;

/// Diagonals of `S3`, `S8`, `S0`.
pub fn channel_operators() -> [[f64; 3]; 3] {
    let s2 = 2f64.sqrt();
    let s6 = 6f64.sqrt();
    let s3 = 3f64.sqrt();
    [
        [1.0 / s2, -1.0 / s2, 0.0],
        [1.0 / s6, 1.0 / s6, -2.0 / s6],
        [1.0 / s3, 1.0 / s3, 1.0 / s3],
    ]
}

/// One channel: frequencies, displacement weights `g_k` and momentum-form
/// couplings `c_k = ωk g_k`.
#[derive(Clone, Debug)]
pub struct ChannelModes {
    pub omegas: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ChannelModes {
    /// `ωk = v_F k`, `g_k = √(2π/(Lk)) e^{−ak/2}`, `k = 2πn/L`.
    pub fn from_couplings(n_modes: usize, c: &AcsCouplings) -> Result<Self> {
        let c = c.validated()?;
        let (omegas, weights) = (1..=n_modes)
            .map(|n| {
                let k = TAU * n as f64 / c.length_l;
                (c.v_fermi * k, (TAU / (c.length_l * k)).sqrt() * (-c.reg_a * k / 2.0).exp())
            })
            .unzip();
        Ok(Self { omegas, weights })
    }
}

fn embed_mode(op: &DMatrix<C64>, mode: usize, n_modes: usize, levels: usize) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(levels, levels);
    (0..n_modes).fold(DMatrix::<C64>::identity(1, 1), |acc, m| kron(&acc, if m == mode { op } else { &id }))
}

/// Max matrix-element deviation of `U H0 U†` from
/// `H0 − Σk ωk g_k i S(b_k − b†_k) + Σk ωk g_k² S²` on states with every
/// occupation at most `n_max − 2`, for `U = exp(−i S Σk g_k(b_k + b†_k))`.
pub fn channel_deviation(s: [f64; 3], modes: &ChannelModes, n_max: usize) -> Result<f64> {
    let n_modes = modes.omegas.len();
    let levels = n_max + 1;
    let bath_dim = levels.checked_pow(n_modes as u32).unwrap_or(usize::MAX);
    let dim = bath_dim.saturating_mul(3);
    if dim > DENSE_CAP {
        return Err(Error::CapExceeded { dim, cap: DENSE_CAP });
    }
    if n_max < 2 {
        return Err(Error::InvalidParameter("n_max must be ≥ 2".into()));
    }
    let b1 = annihilation(n_max);
    let sd = DMatrix::<C64>::from_diagonal(&nalgebra::DVector::from_iterator(3, s.iter().map(|&x| C64::from(x))));
    let s_sq = &sd * &sd;
    let id3 = DMatrix::<C64>::identity(3, 3);
    let i = C64::new(0.0, 1.0);

    let mut h0 = DMatrix::<C64>::zeros(bath_dim, bath_dim);
    let mut x = DMatrix::<C64>::zeros(bath_dim, bath_dim);
    let mut p = DMatrix::<C64>::zeros(bath_dim, bath_dim);
    let mut shift = 0.0;
    for (m, (&w, &g)) in modes.omegas.iter().zip(&modes.weights).enumerate() {
        let b = embed_mode(&b1, m, n_modes, levels);
        let bd = b.adjoint();
        h0 += (&bd * &b) * C64::from(w);
        x += (&b + &bd) * C64::from(g);
        p += (&b - &bd) * (i * w * g);
        shift += w * g * g;
    }
    let generator = kron(&sd, &x) * C64::new(0.0, -1.0);
    let u = expm(&generator);
    let h0_full = kron(&id3, &h0);
    let lhs = &u * &h0_full * u.adjoint();
    let rhs = &h0_full - kron(&sd, &p) + kron(&s_sq, &DMatrix::identity(bath_dim, bath_dim)) * C64::from(shift);

    let keep: Vec<usize> = (0..dim)
        .filter(|&r| {
            let mut j = r % bath_dim;
            (0..n_modes).all(|_| {
                let n = j % levels;
                j /= levels;
                n + 2 <= n_max
            })
        })
        .collect();
    let sel = |m: &DMatrix<C64>| DMatrix::from_fn(keep.len(), keep.len(), |r, c| m[(keep[r], keep[c])]);
    Ok(max_abs_diff(&sel(&lhs), &sel(&rhs)))
}

/// Max over the lowest `n_max − 2` levels of the gap between the spectrum
/// of `ω b†b + g(b + b†)` and `ωn − g²/ω`.
pub fn displaced_oscillator_deviation(omega: f64, g: f64, n_max: usize) -> Result<f64> {
    if n_max < 3 {
        return Err(Error::InvalidParameter("n_max must be ≥ 3".into()));
    }
    let b = annihilation(n_max);
    let bd = b.adjoint();
    let h = (&bd * &b) * C64::from(omega) + (&b + &bd) * C64::from(g);
    let ev = hermitian_eigenvalues(&h);
    Ok((0..=n_max - 3)
        .map(|n| (ev[n] - (omega * n as f64 - g * g / omega)).abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    /// Max over channels 3, 8, 0.
    pub deviation: f64,
    pub channel_deviations: [f64; 3],
    /// `Σk ωk g_k²`, the coefficient of `S_A²` in the constant term.
    pub constant_shift: f64,
    /// Channel-0 coupling of the first mode, `−C_1/√3`.
    pub displaced_coupling: f64,
    pub displaced_deviation: f64,
}

/// Conjugation residual per channel plus the displaced-oscillator
/// spectrum of the first mode.
pub fn conjugation_check(n_modes: usize, n_max: usize, c: &AcsCouplings) -> Result<ConjugationReport> {
    if n_modes < 1 {
        return Err(Error::InvalidParameter("n_modes must be ≥ 1".into()));
    }
    let modes = ChannelModes::from_couplings(n_modes, c)?;
    let mut channel_deviations = [0.0; 3];
    for (slot, s) in channel_operators().into_iter().enumerate() {
        channel_deviations[slot] = channel_deviation(s, &modes, n_max)?;
    }
    let bath = build_bath(1, c, n_max)?;
    let g = -bath.couplings()[0] / 3f64.sqrt();
    let displaced_deviation = displaced_oscillator_deviation(bath.omegas()[0], g, n_max)?;
    Ok(ConjugationReport {
        deviation: channel_deviations.iter().copied().fold(0.0, f64::max),
        channel_deviations,
        constant_shift: modes.omegas.iter().zip(&modes.weights).map(|(w, g)| w * g * g).sum(),
        displaced_coupling: g,
        displaced_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_give_identity() {
        let modes = ChannelModes { omegas: vec![1.0, 2.0], weights: vec![0.0, 0.0] };
        for s in channel_operators() {
            assert_eq!(channel_deviation(s, &modes, 4).unwrap(), 0.0);
        }
    }

    #[test]
    fn one_mode_sector_deviation() {
        let c = AcsCouplings { length_l: TAU, reg_a: TAU, ..Default::default() };
        let r = conjugation_check(1, 12, &c).unwrap();
        assert!(r.deviation <= 1e-6, "{r:?}");
    }

    #[test]
    fn two_modes_fit_under_cap() {
        let c = AcsCouplings { length_l: TAU, reg_a: TAU, ..Default::default() };
        let modes = ChannelModes::from_couplings(2, &c).unwrap();
        let d = channel_deviation(channel_operators()[0], &modes, 8).unwrap();
        assert!(d <= 1e-6, "{d}");
    }

    #[test]
    fn displaced_spectrum_small_coupling() {
        let d = displaced_oscillator_deviation(1.0, 0.05, 12).unwrap();
        assert!(d <= 1e-8, "{d}");
    }

    #[test]
    fn cap_enforced() {
        let modes = ChannelModes { omegas: vec![1.0; 3], weights: vec![0.1; 3] };
        assert!(matches!(channel_deviation([1.0, 0.0, 0.0], &modes, 12), Err(Error::CapExceeded { .. })));
    }
}
