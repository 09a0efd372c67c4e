use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error(
        "matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation}"
    )]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("invalid mask: {0}")]
    InvalidMask(String),
    #[error("index {index} out of range for {len} agents")]
    InvalidIndex { index: usize, len: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::InvalidShape(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::InvalidDimension(msg.into())
    }
}
