//! Short-iterative Lanczos propagation of `exp(-i H dt) ψ`.

use nalgebra::{DMatrix, DVector};

use super::{inner, norm, SparseOperator, C64, I, ZERO};
use crate::error::{Error, Result};

/// Lanczos propagator with a per-step a-posteriori error target.
///
/// The subspace grows until the estimate `β_m |[exp(-i T_m dt) e_1]_m|`
/// falls below `tol`; if `max_dim` is reached first the step fails.
#[derive(Clone, Copy, Debug)]
pub struct KrylovPropagator {
    pub max_dim: usize,
    pub tol: f64,
}

impl Default for KrylovPropagator {
    fn default() -> Self {
        Self { max_dim: 40, tol: 1e-10 }
    }
}

/// Outcome of one propagation step.
#[derive(Clone, Debug)]
pub struct KrylovStep {
    pub state: Vec<C64>,
    pub subspace_dim: usize,
    pub error_estimate: f64,
}

impl KrylovPropagator {
    pub fn new(max_dim: usize, tol: f64) -> Self {
        Self { max_dim, tol }
    }

    /// Propagate `psi` by `exp(-i h dt)`.
    pub fn step(&self, h: &SparseOperator, psi: &[C64], dt: f64) -> Result<KrylovStep> {
        if psi.len() != h.dim() {
            return Err(Error::DimensionMismatch { expected: h.dim(), got: psi.len() });
        }
        let beta0 = norm(psi);
        if beta0 == 0.0 {
            return Ok(KrylovStep { state: psi.to_vec(), subspace_dim: 0, error_estimate: 0.0 });
        }
        let breakdown = 1e-14 * h.inf_norm().max(1.0);
        let max_dim = self.max_dim.min(h.dim()).max(1);

        let mut basis: Vec<Vec<C64>> = vec![psi.iter().map(|z| z / beta0).collect()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![ZERO; h.dim()];

        loop {
            let j = basis.len() - 1;
            h.apply_into(&basis[j], &mut w)?;
            let alpha = inner(&basis[j], &w).re;
            alphas.push(alpha);
            // two passes of full reorthogonalisation
            for _ in 0..2 {
                for v in &basis {
                    let overlap = inner(v, &w);
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= overlap * vi);
                }
            }
            let beta = norm(&w);
            let coeffs = tridiagonal_exp(&alphas, &betas, dt);
            let m = alphas.len();
            let estimate = beta0 * beta * coeffs[m - 1].norm();

            if beta <= breakdown || estimate <= self.tol {
                let mut state = vec![ZERO; h.dim()];
                for (v, c) in basis.iter().zip(coeffs.iter()) {
                    let c = c * beta0;
                    state.iter_mut().zip(v).for_each(|(s, vi)| *s += c * vi);
                }
                let error_estimate = if beta <= breakdown { 0.0 } else { estimate };
                return Ok(KrylovStep { state, subspace_dim: m, error_estimate });
            }
            if m >= max_dim {
                return Err(Error::KrylovTolerance { estimate, tol: self.tol, dim: m });
            }
            betas.push(beta);
            basis.push(w.iter().map(|z| z / beta).collect());
        }
    }
}

/// First column of `exp(-i T dt)` for the real symmetric tridiagonal `T`.
fn tridiagonal_exp(alphas: &[f64], betas: &[f64], dt: f64) -> Vec<C64> {
    let m = alphas.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for (k, &a) in alphas.iter().enumerate() {
        t[(k, k)] = a;
    }
    for (k, &b) in betas.iter().take(m.saturating_sub(1)).enumerate() {
        t[(k, k + 1)] = b;
        t[(k + 1, k)] = b;
    }
    let eig = t.symmetric_eigen();
    let phases: DVector<C64> = eig
        .eigenvalues
        .map(|lambda| (-I * lambda * dt).exp())
        .component_mul(&eig.eigenvectors.row(0).transpose().map(C64::from));
    (0..m)
        .map(|r| {
            (0..m).map(|k| C64::from(eig.eigenvectors[(r, k)]) * phases[k]).sum()
        })
        .collect()
}
