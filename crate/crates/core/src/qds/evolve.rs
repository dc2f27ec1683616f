//! Time evolution of system-bath states and trajectory observables.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inner, norm, KrylovPropagator, SparseOperator, C64};

/// Amplitudes over `level ⊗ bath`, level-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemBathState {
    amplitudes: Vec<C64>,
}

impl SystemBathState {
    /// Normalized to `1e-9`, dimension divisible by three.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() || amplitudes.len() % 3 != 0 {
            return Err(Error::InvalidParameter(format!(
                "state dimension {} is not a multiple of 3",
                amplitudes.len()
            )));
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amplitudes })
    }

    /// `|level⟩ ⊗ |bath vacuum⟩`, level zero-based.
    pub fn product(level: usize, dim: usize) -> Result<Self> {
        if level > 2 {
            return Err(Error::InvalidParameter(format!("level must be 0, 1 or 2, got {level}")));
        }
        let mut a = vec![C64::from(0.0); dim];
        a[level * (dim / 3)] = C64::from(1.0);
        Self::new(a)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    fn level(&self, l: usize) -> &[C64] {
        let b = self.dim() / 3;
        &self.amplitudes[l * b..(l + 1) * b]
    }

    pub fn populations(&self) -> [f64; 3] {
        [0, 1, 2].map(|l| self.level(l).iter().map(|z| z.norm_sqr()).sum())
    }

    /// Reduced density-matrix element `ρ12 = Σ_bath ψ1 ψ2*`.
    pub fn coherence_12(&self) -> C64 {
        inner(self.level(1), self.level(0))
    }
}

/// One sample of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub lam3: f64,
    pub lam8: f64,
    pub re_c12: f64,
    pub im_c12: f64,
    pub norm: f64,
    pub energy: f64,
}

pub const CSV_HEADER: &str = "t,p1,p2,p3,lam3,lam8,re_c12,im_c12,norm,energy";

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
}

impl Trajectory {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.t, r.p1, r.p2, r.p3, r.lam3, r.lam8, r.re_c12, r.im_c12, r.norm, r.energy
            );
        }
        out
    }

    pub fn norm_drift(&self) -> f64 {
        self.rows.iter().map(|r| (r.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest `|E(t) − E(0)| / max(|E(0)|, 1)`.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else { return 0.0 };
        let scale = first.energy.abs().max(1.0);
        self.rows.iter().map(|r| (r.energy - first.energy).abs() / scale).fold(0.0, f64::max)
    }

    /// Largest `|P1 + P2 + P3 − 1|`.
    pub fn population_sum_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.p1 + r.p2 + r.p3 - 1.0).abs()).fold(0.0, f64::max)
    }
}

fn observe(h: &SparseOperator, t: f64, psi: &SystemBathState) -> Result<TrajectoryRow> {
    let [p1, p2, p3] = psi.populations();
    let c12 = psi.coherence_12();
    Ok(TrajectoryRow {
        t,
        p1,
        p2,
        p3,
        lam3: p1 - p2,
        lam8: (p1 + p2 - 2.0 * p3) / 3f64.sqrt(),
        re_c12: c12.re,
        im_c12: c12.im,
        norm: norm(psi.amplitudes()),
        energy: h.expectation(psi.amplitudes())?.re,
    })
}

/// Sample every `dt` up to `t_final` (the last step is shortened to land
/// on `t_final`).
pub fn evolve(
    h: &SparseOperator,
    psi0: &SystemBathState,
    t_final: f64,
    dt: f64,
    propagator: &KrylovPropagator,
) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter(format!("need dt > 0 and t_final ≥ 0, got {dt}, {t_final}")));
    }
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), got: psi0.dim() });
    }
    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let mut psi = psi0.clone();
    let mut traj = Trajectory { rows: vec![observe(h, 0.0, &psi)?] };
    for s in 1..=steps {
        let t = (s as f64 * dt).min(t_final);
        let t_prev = (s - 1) as f64 * dt;
        let step = propagator.step(h, psi.amplitudes(), t - t_prev)?;
        psi = SystemBathState { amplitudes: step.state };
        traj.rows.push(observe(h, t, &psi)?);
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_validation() {
        assert!(SystemBathState::product(3, 9).is_err());
        assert!(SystemBathState::new(vec![C64::from(1.0); 3]).is_err());
        assert!(SystemBathState::new(vec![C64::from(1.0); 4]).is_err());
        let s = SystemBathState::product(1, 9).unwrap();
        assert_eq!(s.populations(), [0.0, 1.0, 0.0]);
    }

    #[test]
    fn csv_header_contract() {
        let t = Trajectory::default();
        assert_eq!(t.to_csv(), "t,p1,p2,p3,lam3,lam8,re_c12,im_c12,norm,energy\n");
    }

    #[test]
    fn last_step_lands_on_final_time() {
        let h = SparseOperator::identity(3);
        let s = SystemBathState::product(0, 3).unwrap();
        let traj = evolve(&h, &s, 1.0, 0.3, &KrylovPropagator::default()).unwrap();
        let times: Vec<f64> = traj.rows.iter().map(|r| r.t).collect();
        assert_eq!(times.len(), 5);
        assert_eq!(*times.last().unwrap(), 1.0);
        let r = traj.rows.last().unwrap();
        assert!((r.p1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_steps() {
        let h = SparseOperator::identity(3);
        let s = SystemBathState::product(0, 3).unwrap();
        assert!(evolve(&h, &s, 1.0, 0.0, &KrylovPropagator::default()).is_err());
        assert!(evolve(&SparseOperator::identity(6), &s, 1.0, 0.1, &KrylovPropagator::default()).is_err());
    }
}
