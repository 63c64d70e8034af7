use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{0} is not a sum of two squares")]
    NotRepresentable(String),

    #[error("not a Descartes quadruple: {0}")]
    NotDescartes(String),

    #[error("quadruple {0} is not a root quadruple")]
    NotReduced(String),

    #[error("{what} exceeded its cap of {limit}")]
    CapExceeded { what: &'static str, limit: u64 },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("no usable sample found: {0}")]
    NoSample(String),

    #[error("samples disagree: {0}")]
    Inconsistent(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
