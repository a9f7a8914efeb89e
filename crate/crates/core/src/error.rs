use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value could not be determined at the working precision. Callers may
    /// retry with a larger precision.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not irreducible")]
    NotIrreducible(String),

    /// Malformed or mathematically invalid user input.
    #[error("{0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A checked invariant failed. This always indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::InsufficientPrecision(msg.into())
    }

    pub fn is_precision(&self) -> bool {
        matches!(self, Error::InsufficientPrecision(_))
    }
}
