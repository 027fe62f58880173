use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input (dimension mismatches, out-of-range modes, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested analytic formula does not cover this topology.
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    /// The requested analytic formula does not cover these parameters
    /// (e.g. unequal phases on a closed array).
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    /// A numerical routine failed or produced a result outside its
    /// integrity tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A series did not converge within the configured term budget.
    #[error("series truncation error: achieved tail bound {achieved:e} > requested {requested:e}")]
    Truncation { achieved: f64, requested: f64 },

    /// The computation would exceed the configured resource budget.
    #[error("resource error: {0}")]
    Resource(String),

    /// A root/solution search found nothing in the requested range.
    /// Carries the scanned residual curve (t, residual) for diagnostics.
    #[error("no solution found in the requested range ({} scan points)", curve.len())]
    NotFound { curve: Vec<(f64, f64)> },
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
