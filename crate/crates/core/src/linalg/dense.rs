//! Dense complex matrix helpers: Padé matrix exponential, Hermitian
//! eigendecomposition and Kronecker products.

use nalgebra::DMatrix;

use super::{C64, I, ONE};

/// Padé(13,13) numerator coefficients.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which Padé(13) is accurate to double precision.
const THETA13: f64 = 5.371_920_351_148_152;

fn one_norm(a: &DMatrix<C64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant.
///
/// Panics if `a` is not square.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }

    let norm = one_norm(a);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * C64::from(0.5f64.powi(squarings));

    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::from(PADE13[k]);

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &ident * b(1);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &ident * b(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is singular");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// `exp(i t H)` for Hermitian `H` through its eigendecomposition.
///
/// This route is independent of [`expm`] and serves as its oracle.
pub fn expm_hermitian(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let eig = h.clone().symmetric_eigen();
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues.map(|lambda| (I * lambda * t).exp()),
    );
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Sorted eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Kronecker product `a ⊗ b` with `a` on the slow index.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of `a† - a`.
pub fn hermiticity_error(a: &DMatrix<C64>) -> f64 {
    (a.adjoint() - a).norm()
}

/// Frobenius norm of `a† a - 1`.
pub fn unitarity_error(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    (a.adjoint() * a - DMatrix::<C64>::identity(n, n)).norm()
}

/// Dense truncated annihilation operator on levels `0..=n_max`.
pub fn annihilation(n_max: usize) -> DMatrix<C64> {
    let mut b = DMatrix::zeros(n_max + 1, n_max + 1);
    for n in 1..=n_max {
        b[(n - 1, n)] = ONE * (n as f64).sqrt();
    }
    b
}
