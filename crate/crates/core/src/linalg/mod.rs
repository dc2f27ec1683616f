//! Dense and sparse complex linear algebra used throughout the crate.

pub mod dense;
pub mod krylov;
pub mod sparse;

pub use num_complex::Complex64 as C64;

pub use dense::{expm, expm_hermitian, hermitian_eigenvalues, kron};
pub use krylov::KrylovPropagator;
pub use sparse::SparseOperator;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Euclidean norm of a complex vector.
pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>` with the first argument conjugated.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
