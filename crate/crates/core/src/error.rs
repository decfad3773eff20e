use thiserror::Error;

/// Errors raised by problem construction, evaluation and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates a structural invariant (dimension, count, sign).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A point lies outside the open positive orthant, or a finite-difference
    /// stencil would leave it.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested numeric check exceeds what nested finite differences can
    /// resolve.
    #[error("capability error: {0}")]
    Capability(String),
}

pub type Result<T> = std::result::Result<T, Error>;
