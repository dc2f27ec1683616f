use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("coupling outside the reparametrisation domain: {0}")]
    Domain(String),

    #[error("degenerate couplings: {0}")]
    Degenerate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("S-matrix does not match any R-matrix branch (best residual {residual:.3e})")]
    Mismatch { residual: f64 },

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {dim} exceeds configured cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("Krylov step failed: error estimate {estimate:.3e} above tolerance {tol:.1e} with subspace size {dim}")]
    KrylovTolerance { estimate: f64, tol: f64, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
