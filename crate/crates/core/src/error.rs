use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Caller misuse: empty inputs, out-of-range indices, unknown names.
    #[error("usage error: {0}")]
    Usage(String),

    /// Every candidate partial fell outside the audible band.
    #[error("empty spectrum: no partial of f0 = {fundamental} Hz lies in [{min}, {max}] Hz")]
    EmptySpectrum { fundamental: f64, min: f64, max: f64 },

    /// A configuration value violates a model invariant.
    #[error("invalid configuration `{key}`: {reason}")]
    InvalidConfig { key: &'static str, reason: String },

    /// Correlation of a constant buffer.
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
