use thiserror::Error;

/// Errors raised by the library. Every variant maps onto one report status
/// in [`crate::runner`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime (divisible by {1})")]
    NotPrime(u64, u64),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("numerical instability: direct value {direct}, rearranged value {rearranged}")]
    NumericalInstability { direct: f64, rearranged: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("degenerate fiber: singular polynomial vanishes identically")]
    DegenerateFiber,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
