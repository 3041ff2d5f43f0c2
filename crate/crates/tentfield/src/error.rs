//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by constructors, validators, and drivers.
#[derive(Debug, Error)]
pub enum TentError {
    /// A scalar parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A grid or resolution choice cannot support the requested computation.
    #[error("configuration error: {0}")]
    Config(String),

    /// Curve validation failed; indices refer to the sample list.
    #[error("curve error: {reason} (samples {i} and {k})")]
    CurvePair { reason: String, i: usize, k: usize },

    /// Curve-level validation failed without a specific offending pair.
    #[error("curve error: {0}")]
    Curve(String),

    /// Array shapes disagree with the grids they claim to live on.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Input data could not be parsed or was internally inconsistent.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Underlying I/O failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Serialization failure for the JSON headers and reports.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl TentError {
    pub fn domain(msg: impl Into<String>) -> Self {
        TentError::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        TentError::Config(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        TentError::InvalidInput(msg.into())
    }
    pub fn shape(msg: impl Into<String>) -> Self {
        TentError::Shape(msg.into())
    }
}
