//! Particle-impurity scattering and its trigonometric R-matrix form.
//!
//! Two-site operators act on particle ⊗ impurity with the particle index
//! slow: row `3α + γ` for particle level `α` and impurity level `γ`
//! (zero-based).

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dense, C64, I, ONE};

/// Couplings of the anisotropic three-component fermion-impurity model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcsCouplings {
    pub j_par: f64,
    pub j_perp: f64,
    pub zeta12: f64,
    pub zeta13: f64,
    pub zeta23: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub length_l: f64,
    pub v_fermi: f64,
    pub reg_a: f64,
}

impl Default for AcsCouplings {
    fn default() -> Self {
        Self {
            j_par: 0.0,
            j_perp: 0.0,
            zeta12: 0.0,
            zeta13: 0.0,
            zeta23: 0.0,
            h1: 0.0,
            h2: 0.0,
            h3: 0.0,
            length_l: TAU,
            v_fermi: 1.0,
            reg_a: 0.1,
        }
    }
}

impl AcsCouplings {
    /// Check the kinematic invariants and reduce phases into `[0, 2π)`.
    pub fn validated(mut self) -> Result<Self> {
        let all = [
            self.j_par, self.j_perp, self.zeta12, self.zeta13, self.zeta23, self.h1, self.h2,
            self.h3, self.length_l, self.v_fermi, self.reg_a,
        ];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("couplings must be finite".into()));
        }
        for (name, v) in [("length_L", self.length_l), ("v_fermi", self.v_fermi), ("reg_a", self.reg_a)] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        self.zeta12 = self.zeta12.rem_euclid(TAU);
        self.zeta13 = self.zeta13.rem_euclid(TAU);
        self.zeta23 = self.zeta23.rem_euclid(TAU);
        Ok(self)
    }

    /// Phase of pair `(α, β)`, `α < β`, zero-based.
    pub fn zeta(&self, alpha: usize, beta: usize) -> f64 {
        match (alpha, beta) {
            (0, 1) => self.zeta12,
            (0, 2) => self.zeta13,
            (1, 2) => self.zeta23,
            _ => panic!("no phase for pair ({alpha}, {beta})"),
        }
    }

    pub fn with_equal_phases(mut self, zeta: f64) -> Self {
        self.zeta12 = zeta;
        self.zeta13 = zeta;
        self.zeta23 = zeta;
        self
    }

    /// Gauge-invariant phase combination `ζ23 − ζ13 + ζ12`.
    pub fn phase_flux(&self) -> f64 {
        self.zeta23 - self.zeta13 + self.zeta12
    }

    /// Phases after conjugating the particle factor by
    /// `diag(e^{iθ1}, e^{iθ2}, e^{iθ3})`: `ζαβ → ζαβ + θα − θβ`.
    pub fn gauge_shifted(mut self, theta: [f64; 3]) -> Self {
        self.zeta12 += theta[0] - theta[1];
        self.zeta13 += theta[0] - theta[2];
        self.zeta23 += theta[1] - theta[2];
        self
    }
}

/// 9×9 operator on particle ⊗ impurity.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoSiteOperator(pub DMatrix<C64>);

pub const fn pair_index(particle: usize, impurity: usize) -> usize {
    3 * particle + impurity
}

impl TwoSiteOperator {
    pub fn zeros() -> Self {
        Self(DMatrix::zeros(9, 9))
    }

    pub fn identity() -> Self {
        Self(DMatrix::identity(9, 9))
    }

    /// `e_αβ ⊗ e_γδ`.
    pub fn elementary(alpha: usize, beta: usize, gamma: usize, delta: usize) -> Self {
        let mut m = DMatrix::zeros(9, 9);
        m[(pair_index(alpha, gamma), pair_index(beta, delta))] = ONE;
        Self(m)
    }

    /// Swap `P = Σ e_αβ ⊗ e_βα`.
    pub fn swap() -> Self {
        let mut m = DMatrix::zeros(9, 9);
        for a in 0..3 {
            for b in 0..3 {
                m[(pair_index(a, b), pair_index(b, a))] = ONE;
            }
        }
        Self(m)
    }

    fn add_term(&mut self, coef: C64, alpha: usize, beta: usize, gamma: usize, delta: usize) {
        self.0[(pair_index(alpha, gamma), pair_index(beta, delta))] += coef;
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn hermiticity_error(&self) -> f64 {
        dense::hermiticity_error(&self.0)
    }

    pub fn unitarity_error(&self) -> f64 {
        dense::unitarity_error(&self.0)
    }

    pub fn eigenvalues_unitary(&self) -> Vec<C64> {
        let mut ev: Vec<C64> = self
            .0
            .clone()
            .schur()
            .eigenvalues()
            .expect("complex Schur form is triangular")
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
        ev
    }

    /// Embed into three sites as `R_12`, `R_13` or `R_23`.
    pub fn embed(&self, sites: (usize, usize)) -> DMatrix<C64> {
        let id3 = DMatrix::<C64>::identity(3, 3);
        match sites {
            (0, 1) => self.0.kronecker(&id3),
            (1, 2) => id3.kronecker(&self.0),
            (0, 2) => {
                let p23 = id3.kronecker(&Self::swap().0);
                &p23 * self.0.kronecker(&id3) * &p23
            }
            _ => panic!("unsupported site pair {sites:?}"),
        }
    }
}

/// `H_int = J∥ Σ e_αα⊗e_αα + J⊥ Σ_{α<β} (e^{iζαβ} e_αβ⊗e_βα + h.c.)`.
pub fn build_interaction(c: &AcsCouplings) -> TwoSiteOperator {
    let mut h = TwoSiteOperator::zeros();
    for a in 0..3 {
        h.add_term(C64::from(c.j_par), a, a, a, a);
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let phase = C64::from_polar(c.j_perp, c.zeta(a, b));
            h.add_term(phase, a, b, b, a);
            h.add_term(phase.conj(), b, a, a, b);
        }
    }
    h
}

/// `S = exp(i H)`; rejects non-Hermitian input.
pub fn scattering_matrix(h: &TwoSiteOperator) -> Result<TwoSiteOperator> {
    let deviation = h.hermiticity_error();
    if deviation > 1e-12 {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(TwoSiteOperator(dense::expm(&(&h.0 * I))))
}

/// Closed form of `exp(i H_int)`:
/// `e^{iJ∥}` on `|αα⟩`, `cos J⊥` on `|αβ⟩`, `i sin J⊥ e^{±iζαβ}` across.
pub fn scattering_closed_form(c: &AcsCouplings) -> TwoSiteOperator {
    let mut s = TwoSiteOperator::zeros();
    let diag = C64::from_polar(1.0, c.j_par);
    for a in 0..3 {
        s.add_term(diag, a, a, a, a);
        for b in 0..3 {
            if a != b {
                s.add_term(C64::from(c.j_perp.cos()), a, a, b, b);
            }
        }
    }
    let amp = I * c.j_perp.sin();
    for a in 0..3 {
        for b in (a + 1)..3 {
            let phase = C64::from_polar(1.0, c.zeta(a, b));
            s.add_term(amp * phase, a, b, b, a);
            s.add_term(amp * phase.conj(), b, a, a, b);
        }
    }
    s
}

/// Logarithmic R-matrix parameters `x = e^{i f̄}`, `q = e^{μ̄}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigParams {
    pub f_bar: f64,
    pub mu_bar: f64,
}

/// Trigonometric R-matrix
/// `sinh(i f̄ + μ̄) Σ e_αα⊗e_αα + i sin f̄ Σ_{α≠β} e_αα⊗e_ββ
///  + sinh μ̄ Σ_{α<β} (e^{i f̄} e_αβ⊗e_βα + e^{−i f̄} e_βα⊗e_αβ)`.
pub fn build_r_matrix(t: &TrigParams) -> TwoSiteOperator {
    let mut r = TwoSiteOperator::zeros();
    let diag = C64::new(t.mu_bar, t.f_bar).sinh();
    let mixed = I * t.f_bar.sin();
    let hop = t.mu_bar.sinh();
    for a in 0..3 {
        r.add_term(diag, a, a, a, a);
        for b in 0..3 {
            if a != b {
                r.add_term(mixed, a, a, b, b);
            }
        }
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            r.add_term(C64::from_polar(hop, t.f_bar), a, b, b, a);
            r.add_term(C64::from_polar(hop, -t.f_bar), b, a, a, b);
        }
    }
    r
}

/// `‖R12 R13 R23 − R23 R13 R12‖ / ‖R12 R13 R23‖` with
/// `R12 = R(f1)`, `R13 = R(f1 + f2)`, `R23 = R(f2)` at common `μ̄`.
///
/// Falls back to the absolute residual when the product vanishes.
pub fn yang_baxter_residual(f1: f64, f2: f64, mu: f64) -> f64 {
    let r12 = build_r_matrix(&TrigParams { f_bar: f1, mu_bar: mu }).embed((0, 1));
    let r13 = build_r_matrix(&TrigParams { f_bar: f1 + f2, mu_bar: mu }).embed((0, 2));
    let r23 = build_r_matrix(&TrigParams { f_bar: f2, mu_bar: mu }).embed((1, 2));
    let lhs = &r12 * &r13 * &r23;
    let rhs = &r23 * &r13 * &r12;
    let diff = (&lhs - &rhs).norm();
    let scale = lhs.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// Couplings → `(f̄, μ̄)` via
/// `cosh μ̄ = cos J∥ / cos J⊥`, `cot² f̄ = sin² J∥ / (sin(J⊥+J∥) sin(J⊥−J∥))`,
/// with `f̄ ∈ (0, π/2]` and `μ̄ ≥ 0`.
pub fn reparametrize(j_par: f64, j_perp: f64) -> Result<TrigParams> {
    if !(j_par.is_finite() && j_perp.is_finite()) {
        return Err(Error::InvalidParameter("couplings must be finite".into()));
    }
    let sum = (j_perp + j_par).sin();
    let diff = (j_perp - j_par).sin();
    let denom = sum * diff;
    if denom.abs() < 1e-14 {
        return Err(Error::Degenerate(format!(
            "sin(J⊥+J∥)·sin(J⊥−J∥) = 0 at J∥ = {j_par}, J⊥ = {j_perp} (isotropic limit)"
        )));
    }
    let cos_perp = j_perp.cos();
    if cos_perp.abs() < 1e-300 {
        return Err(Error::Domain(format!("cos J⊥ = 0 at J⊥ = {j_perp}")));
    }
    let cosh_mu = j_par.cos() / cos_perp;
    if cosh_mu < 1.0 {
        return Err(Error::Domain(format!("cos J∥ / cos J⊥ = {cosh_mu} < 1")));
    }
    let cot_sq = j_par.sin().powi(2) / denom;
    if cot_sq < 0.0 {
        return Err(Error::Domain(format!("cot² f̄ = {cot_sq} < 0")));
    }
    Ok(TrigParams { f_bar: 1f64.atan2(cot_sq.sqrt()), mu_bar: cosh_mu.acosh() })
}

/// Result of fitting `S ≈ c R` for one sign branch.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SrMatch {
    /// Least-squares scalar `c`.
    pub scale: C64,
    /// `‖S − c R‖ / ‖S‖`.
    pub residual: f64,
    /// `‖S − c R‖ / ‖R‖`.
    pub residual_over_r: f64,
    /// Signs applied to `(f̄, μ̄)`.
    pub branch: (i8, i8),
    /// Branch parameters; the common phase used in `S` is `params.f_bar`.
    pub params: TrigParams,
}

/// Least-squares `c` minimising `‖S − c R‖_F`.
pub fn fit_scale(s: &TwoSiteOperator, r: &TwoSiteOperator) -> C64 {
    let num: C64 = r.0.iter().zip(s.0.iter()).map(|(rv, sv)| rv.conj() * sv).sum();
    let den: f64 = r.0.iter().map(|z| z.norm_sqr()).sum();
    num / den
}

/// Identify `exp(i H_int)` with a trigonometric R-matrix.
///
/// Requires `ζ12 = ζ13 = ζ23`. The phase is then set to the branch value
/// of `f̄` and all four sign branches `(±f̄, ±μ̄)` are tried; the best
/// one is returned. A best residual above `1e-6` is a [`Error::Mismatch`].
pub fn match_s_to_r(c: &AcsCouplings) -> Result<SrMatch> {
    let c = c.validated()?;
    let spread = [c.zeta12, c.zeta13, c.zeta23]
        .iter()
        .map(|z| {
            let d = (z - c.zeta12).rem_euclid(TAU);
            d.min(TAU - d)
        })
        .fold(0.0, f64::max);
    if spread > 1e-12 {
        return Err(Error::Precondition(format!(
            "solvability requires ζ12 = ζ13 = ζ23, got ({}, {}, {})",
            c.zeta12, c.zeta13, c.zeta23
        )));
    }
    let base = reparametrize(c.j_par, c.j_perp)?;
    let mut best: Option<SrMatch> = None;
    for sf in [1i8, -1] {
        for sm in [1i8, -1] {
            let params = TrigParams { f_bar: sf as f64 * base.f_bar, mu_bar: sm as f64 * base.mu_bar };
            let s = scattering_closed_form(&c.with_equal_phases(params.f_bar));
            let r = build_r_matrix(&params);
            let scale = fit_scale(&s, &r);
            let misfit = (&s.0 - &r.0 * scale).norm();
            let candidate = SrMatch {
                scale,
                residual: misfit / s.0.norm(),
                residual_over_r: misfit / r.0.norm(),
                branch: (sf, sm),
                params,
            };
            if best.map_or(true, |b| candidate.residual < b.residual) {
                best = Some(candidate);
            }
        }
    }
    let best = best.expect("four branches evaluated");
    if best.residual > 1e-6 {
        return Err(Error::Mismatch { residual: best.residual });
    }
    Ok(best)
}

/// Sample grid used by the Yang-Baxter scan: `0.1, 0.2, …, 1.4`.
pub fn ybe_grid() -> Vec<f64> {
    (1..=14).map(|k| k as f64 / 10.0).collect()
}

pub const YBE_MU_VALUES: [f64; 3] = [0.2, 0.5, 1.0];

/// Normalise an angle into `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}
