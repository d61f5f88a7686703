use thiserror::Error;

/// Errors raised by the algebra and verification layers.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the arguments was violated (mismatched caps,
    /// nonzero constant term in `exp`, unsupported operator index, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// A value outside the domain of a partial operation, such as
    /// specializing the Laurent symbol β at zero.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
