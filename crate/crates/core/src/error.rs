use thiserror::Error;

/// Errors raised by the toolkit.
///
/// "Not applicable" outcomes (a bound whose side condition fails, a supremum
/// over fewer than two nodes) are not errors; they surface as `Option`s or as
/// [`crate::bounds::BoundOutcome::NotApplicable`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular operator: {0}")]
    SingularOperator(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("value out of range: {0}")]
    Range(String),

    /// Input data (typically a frame file) failed validation.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
