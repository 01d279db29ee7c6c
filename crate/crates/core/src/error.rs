use thiserror::Error;

use crate::scalar::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot mix {left} and {right} scalars without an explicit conversion")]
    MixedExactness { left: Field, right: Field },

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("{kernel}: size {size} exceeds the configured cap of {cap}")]
    Capacity {
        kernel: &'static str,
        size: u64,
        cap: u64,
    },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("value has a nonzero imaginary part: {0}")]
    NotReal(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
