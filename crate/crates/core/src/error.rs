use thiserror::Error;

/// Errors raised by the entanglement toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural validation failure (partition, state file, sector).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("mode count mismatch: expected {expected}, got {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("not a parity eigenstate")]
    NotParityEigenstate,

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    /// An internal consistency check failed (e.g. imaginary residue of an expectation value).
    #[error("numeric inconsistency: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
