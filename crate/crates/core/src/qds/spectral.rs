//! Continuum check of the discretized bath against `J(ω) = α ω e^{−ω/ωc}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::bath::BathDiscretization;
use super::params::QdsParams;
use crate::error::{Error, Result};

/// Gaussian test function `exp(−(ω − center)²/(2 width²))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianTest {
    pub center: f64,
    pub width: f64,
}

impl GaussianTest {
    pub fn eval(&self, w: f64) -> f64 {
        (-(w - self.center).powi(2) / (2.0 * self.width * self.width)).exp()
    }
}

/// Gauss-Legendre nodes and weights on `[−1, 1]` (Golub-Welsch).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = k as f64 / ((4 * k * k - 1) as f64).sqrt();
        jac[(k - 1, k)] = b;
        jac[(k, k - 1)] = b;
    }
    let eig = jac.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Composite Gauss-Legendre on `[lo, hi]` with `panels` panels of `order`
/// nodes.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = lo + (p as f64 + 0.5) * h;
            x.iter().zip(&w).map(|(xi, wi)| wi * f(mid + 0.5 * h * xi)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// `∫₀^∞ α ω e^{−ω/ωc} f(ω) dω`, truncated where the Gaussian is below
/// machine precision.
pub fn continuum_integral(q: &QdsParams, f: &GaussianTest) -> f64 {
    let hi = f.center + 40.0 * f.width;
    let lo = (f.center - 40.0 * f.width).max(0.0);
    integrate(|w| q.alpha * w * (-w / q.omega_c).exp() * f.eval(w), lo, hi, 64, 32)
}

/// `|Σk Ck² f(ωk) − ∫ J f| / |∫ J f|`; zero when both sides vanish.
pub fn spectral_density_residual(b: &BathDiscretization, q: &QdsParams, f: &GaussianTest) -> Result<f64> {
    let q = q.validated()?;
    if !(f.width > 0.0 && f.center.is_finite()) {
        return Err(Error::InvalidParameter("test function needs a positive width".into()));
    }
    let sum: f64 = b.modes().map(|(w, c)| c * c * f.eval(w)).sum();
    let integral = continuum_integral(&q, f);
    if integral == 0.0 {
        return Ok(sum.abs());
    }
    Ok((sum - integral).abs() / integral.abs())
}

/// Least-squares slope of `−log residual` against `log n`.
pub fn convergence_order(samples: &[(usize, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(n, r)| ((n as f64).ln(), r.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    -sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qds::bath::ohmic_bath;

    fn q(alpha: f64) -> QdsParams {
        QdsParams { eps3: 0.0, eps8: 0.0, delta: 0.0, zeta: 0.0, alpha, omega_c: 1.0 }
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8);
        let int: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((int - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        // ∫₀^∞ ω e^{−ω} dω = 1
        let v = integrate(|w| w * (-w).exp(), 0.0, 60.0, 64, 32);
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn residual_is_small_with_many_modes() {
        let p = q(0.2);
        let f = GaussianTest { center: 0.3, width: 0.1 };
        let b = ohmic_bath(&p, 200, 5.0 / 200.0, 1).unwrap();
        assert!(spectral_density_residual(&b, &p, &f).unwrap() <= 0.02);
    }

    #[test]
    fn decoupled_bath_gives_zero() {
        let p = q(0.0);
        let b = ohmic_bath(&p, 50, 0.1, 1).unwrap();
        let f = GaussianTest { center: 0.3, width: 0.1 };
        assert_eq!(spectral_density_residual(&b, &p, &f).unwrap(), 0.0);
    }

    #[test]
    fn converges_at_least_linearly() {
        let p = q(0.5);
        let f = GaussianTest { center: 0.3, width: 0.1 };
        let samples: Vec<(usize, f64)> = [50, 100, 200, 400]
            .iter()
            .map(|&n| (n, spectral_density_residual(&ohmic_bath(&p, n, 5.0 / n as f64, 1).unwrap(), &p, &f).unwrap()))
            .collect();
        assert!(convergence_order(&samples) >= 1.0, "{samples:?}");
    }
}
