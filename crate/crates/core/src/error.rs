use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    /// The sequences fall outside the family where the regime conditions are decidable.
    #[error("undecidable regime: {0}")]
    Undecidable(String),

    #[error("degenerate limit: no normalization exists")]
    NoNormalization,

    #[error("fit failure: {0}")]
    Fit(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
