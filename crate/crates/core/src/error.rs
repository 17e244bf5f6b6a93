use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or operation received parameters outside its domain.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The eigensolver exceeded its sweep budget on one eigenvalue.
    /// Never silent: callers must surface this as a diagnostic.
    #[error("eigensolver failed to converge on eigenvalue {index} after {sweeps} sweeps")]
    NoConvergence { index: usize, sweeps: usize },

    /// The engineered-chain eigenvector recursion divides by the eigenvalue
    /// in its final step and is singular at zero.
    #[error("eigenvector recursion is singular at eigenvalue zero")]
    ZeroEigenvalue,

    /// An operation that requires a passing certificate was given a failed one.
    #[error("operation requires a passing spectrum-parity certificate")]
    NotCertified,

    /// A state vector had zero (or non-unit, where required) norm.
    #[error("state vector norm {norm} outside tolerance of 1")]
    NotNormalized { norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
