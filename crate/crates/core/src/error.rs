use crate::scalar::Mode;

/// Errors raised by the library. Every variant names the violated precondition.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("scalar mode mismatch: {left:?} vs {right:?}")]
    ModeMismatch { left: Mode, right: Mode },

    #[error("exponent window overflows the integer range")]
    WindowOverflow,

    #[error("empty coefficient window")]
    EmptyWindow,

    #[error("exp argument has a nonzero term at exponent {0}; lowest exponent must be >= 1")]
    NonzeroLowTerm(i64),

    #[error("divergent specialization: {0}")]
    Divergent(String),

    #[error("insufficient coefficient order: need {need}, have {have}")]
    InsufficientOrder { need: usize, have: usize },

    #[error("pfaffian of odd dimension {0}")]
    OddDimension(usize),

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    ScaleLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("closed form did not produce a nonnegative integer: {0}")]
    NonInteger(String),

    #[error("unsupported specialization: {0}")]
    Unsupported(String),

    #[error("cannot certify the requested accuracy: {0}")]
    Uncertified(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_scale(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::ScaleLimit { what, value, limit })
    } else {
        Ok(())
    }
}
