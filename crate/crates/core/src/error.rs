//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, simulation, and verification.
#[derive(Debug, Error)]
pub enum Error {
    /// A dimension was zero or exceeds the dense-representation cap.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Two objects that must share a dimension do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An index or residue lies outside its register.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A state that must be normalized is not.
    #[error("state not normalized: squared-norm deviation {0:.3e}")]
    NotNormalized(f64),

    /// A parameter violates an algorithm's precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The non-evasiveness promise F(0)=F(k), F(n-k)=F(n) does not hold.
    #[error("promise violated: {0}")]
    PromiseViolated(String),

    /// A function-spec file or bit string failed to parse.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// Exhaustive enumeration was requested above the configured cap.
    #[error("exhaustive sweep over n={n} exceeds the cap of n<={cap}; use sampled mode")]
    CapExceeded { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("report serialization failed: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
