use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed object: wrong dimensions, duplicate couplings, bad symbols.
    #[error("construction error: {0}")]
    Construction(String),
    /// Argument outside the domain of a function.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
