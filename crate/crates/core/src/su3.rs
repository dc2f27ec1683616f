//! U(3) algebra in the fundamental representation: elementary matrices,
//! the extended Gell-Mann basis `λ0..λ8`, Jacobi coordinates and the
//! charge-sector detuning shift.
//!
//! Indices `α, β` of elementary matrices are zero-based here (`0, 1, 2`
//! stand for levels 1, 2, 3).

use std::ops::{Add, Index, Mul, Sub};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::linalg::{C64, I, ONE, ZERO};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// 3×3 complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatrixC3(pub Matrix3<C64>);

impl MatrixC3 {
    pub fn zeros() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    /// Elementary matrix `e_αβ` with a single 1 at `(α, β)`.
    pub fn elementary(alpha: usize, beta: usize) -> Self {
        let mut m = Matrix3::zeros();
        m[(alpha, beta)] = ONE;
        Self(m)
    }

    pub fn from_real_diagonal(d: [f64; 3]) -> Self {
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            m[(k, k)] = C64::from(d[k]);
        }
        Self(m)
    }

    pub fn from_rows(rows: [[C64; 3]; 3]) -> Self {
        Self(Matrix3::from_fn(|r, c| rows[r][c]))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0 * s)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(self.0 * other.0 - other.0 * self.0)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).max_abs() <= tol
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= tol
    }
}

impl Index<(usize, usize)> for MatrixC3 {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl Add for MatrixC3 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl Sub for MatrixC3 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl Mul for MatrixC3 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// Gell-Mann positions of the off-diagonal generators.
pub const OFF_DIAGONAL: [usize; 6] = [1, 2, 4, 5, 6, 7];

/// Extended Gell-Mann basis `λ0..λ8`, normalised so that
/// `½ Tr(λA λB) = δAB`.
#[derive(Clone, Debug, PartialEq)]
pub struct GellMannBasis {
    lambdas: [MatrixC3; 9],
}

impl GellMannBasis {
    pub fn get(&self, a: usize) -> &MatrixC3 {
        &self.lambdas[a]
    }

    pub fn iter(&self) -> impl Iterator<Item = &MatrixC3> {
        self.lambdas.iter()
    }

    /// `max |½ Tr(λA λB) − δAB|` over all 81 pairs.
    pub fn orthogonality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..9 {
            for b in 0..9 {
                let g = (self.lambdas[a] * self.lambdas[b]).trace() * 0.5;
                let target = if a == b { ONE } else { ZERO };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

impl Default for GellMannBasis {
    fn default() -> Self {
        build_basis()
    }
}

pub fn build_basis() -> GellMannBasis {
    let z = ZERO;
    let o = ONE;
    let sqrt3 = 3f64.sqrt();
    let lambdas = [
        MatrixC3::identity().scale(C64::from((2.0f64 / 3.0).sqrt())),
        MatrixC3::from_rows([[z, o, z], [o, z, z], [z, z, z]]),
        MatrixC3::from_rows([[z, -I, z], [I, z, z], [z, z, z]]),
        MatrixC3::from_real_diagonal([1.0, -1.0, 0.0]),
        MatrixC3::from_rows([[z, z, o], [z, z, z], [o, z, z]]),
        MatrixC3::from_rows([[z, z, -I], [z, z, z], [I, z, z]]),
        MatrixC3::from_rows([[z, z, z], [z, z, o], [z, o, z]]),
        MatrixC3::from_rows([[z, z, z], [z, z, -I], [z, I, z]]),
        MatrixC3::from_real_diagonal([1.0 / sqrt3, 1.0 / sqrt3, -2.0 / sqrt3]),
    ];
    GellMannBasis { lambdas }
}

/// Orthogonal coordinates of a Hermitian 3×3 matrix.
///
/// The diagonal sector uses the Jacobi three-body combinations
/// `x3 = (x11 − x22)/√2`, `x8 = (x11 + x22 − 2x33)/√6`,
/// `x0 = (x11 + x22 + x33)/√3`; the off-diagonal sector stores
/// `xA = ½ Tr(x λA)` for `A ∈ {1, 2, 4, 5, 6, 7}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalCoords {
    pub x0: f64,
    pub x3: f64,
    pub x8: f64,
    /// Ordered as [`OFF_DIAGONAL`].
    pub off: [f64; 6],
}

/// Jacobi combinations `(x3, x8, x0)` of three diagonal values.
pub fn jacobi(d: [f64; 3]) -> (f64, f64, f64) {
    (
        (d[0] - d[1]) / SQRT2,
        (d[0] + d[1] - 2.0 * d[2]) / 6f64.sqrt(),
        (d[0] + d[1] + d[2]) / 3f64.sqrt(),
    )
}

/// Inverse of [`jacobi`].
pub fn jacobi_inverse(x3: f64, x8: f64, x0: f64) -> [f64; 3] {
    let s3 = 3f64.sqrt();
    let s6 = 6f64.sqrt();
    [
        x0 / s3 + x3 / SQRT2 + x8 / s6,
        x0 / s3 - x3 / SQRT2 + x8 / s6,
        x0 / s3 - 2.0 * x8 / s6,
    ]
}

/// Decompose `x`. Only the Hermitian part of `x` is represented.
pub fn to_orthogonal_coords(x: &MatrixC3) -> OrthogonalCoords {
    let basis = build_basis();
    let (x3, x8, x0) = jacobi([x[(0, 0)].re, x[(1, 1)].re, x[(2, 2)].re]);
    let mut off = [0.0; 6];
    for (slot, &a) in off.iter_mut().zip(OFF_DIAGONAL.iter()) {
        *slot = ((*x * *basis.get(a)).trace() * 0.5).re;
    }
    OrthogonalCoords { x0, x3, x8, off }
}

impl OrthogonalCoords {
    pub fn to_matrix(&self) -> MatrixC3 {
        let basis = build_basis();
        let mut m = MatrixC3::from_real_diagonal(jacobi_inverse(self.x3, self.x8, self.x0));
        for (&xa, &a) in self.off.iter().zip(OFF_DIAGONAL.iter()) {
            m = m + basis.get(a).scale(C64::from(xa));
        }
        m
    }
}

/// Residual of `δαβ δγδ = ⅓ δγβ δαδ + ½ Σ_{A=1..8} (λA)γβ (λA)αδ`,
/// maximised over all 81 index tuples.
pub fn completeness_residual() -> f64 {
    completeness_scan(false)
}

/// Same identity written over `λ0..λ8` with no separate `⅓` term.
pub fn completeness_residual_extended() -> f64 {
    completeness_scan(true)
}

fn completeness_scan(extended: bool) -> f64 {
    let basis = build_basis();
    let generators = if extended { 0..9 } else { 1..9 };
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for g in 0..3 {
                for d in 0..3 {
                    let lhs = C64::from(delta(a, b) * delta(g, d));
                    let mut rhs: C64 = generators
                        .clone()
                        .map(|k| basis.get(k)[(g, b)] * basis.get(k)[(a, d)] * 0.5)
                        .sum();
                    if !extended {
                        rhs += delta(g, b) * delta(a, d) / 3.0;
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// `max ‖[e_αβ, e_γδ] − (δβγ e_αδ − δαδ e_γβ)‖` over all index tuples.
pub fn commutator_table_residual() -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            for g in 0..3 {
                for d in 0..3 {
                    let lhs = MatrixC3::elementary(a, b).commutator(&MatrixC3::elementary(g, d));
                    let mut rhs = MatrixC3::zeros();
                    if b == g {
                        rhs = rhs + MatrixC3::elementary(a, d);
                    }
                    if a == d {
                        rhs = rhs - MatrixC3::elementary(g, b);
                    }
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
    }
    worst
}

/// Projection onto fixed eigenvalues of the conserved charges, with the
/// residual charge-polynomial coefficients `C`, `C3`, `C8`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ChargeSector {
    pub n0: i64,
    pub m3: f64,
    pub m8: f64,
    pub c: f64,
    pub c3: f64,
    pub c8: f64,
}

/// Shift `(δε3, δε8) = (−(C M3 + ½ C3), −(C M8 + ½ C8))`.
pub fn detuning_shift(s: &ChargeSector) -> (f64, f64) {
    (-(s.c * s.m3 + 0.5 * s.c3), -(s.c * s.m8 + 0.5 * s.c8))
}

/// Weights `(m, y)` of the fundamental representation: eigenvalues of
/// `λ3` and `λ8` on the three levels.
pub fn fundamental_weights() -> [(f64, f64); 3] {
    let s3 = 3f64.sqrt();
    [(1.0, 1.0 / s3), (-1.0, 1.0 / s3), (0.0, -2.0 / s3)]
}

/// `max |m² + y² − 4/3|` over the fundamental weights.
pub fn weight_norm_residual() -> f64 {
    fundamental_weights()
        .iter()
        .map(|(m, y)| (m * m + y * y - 4.0 / 3.0).abs())
        .fold(0.0, f64::max)
}
