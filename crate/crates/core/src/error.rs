use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("modulus {modulus:?} over GF({p}) is reducible: {reason}")]
    Reducible {
        p: u32,
        modulus: Vec<u32>,
        reason: String,
    },

    #[error("field order {p}^{m} exceeds the capacity limit of {limit} elements")]
    Capacity { p: u32, m: u32, limit: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
