use thiserror::Error;

/// Errors raised by the computational routines.
///
/// Every variant describes an input that falls outside the domain of the
/// requested operation; none of them signal an internal failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The quadratic phase is not a function on the requested quotient.
    #[error("ill-defined sum: {0}")]
    IllDefined(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("imaginary part is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
