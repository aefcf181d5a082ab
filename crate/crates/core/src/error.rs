use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two operands live over different fields.
    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    /// Malformed text or file input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A floating-point routine failed (eigenvalue solver, etc).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
