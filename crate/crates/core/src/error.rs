use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid potential: {0}")]
    InvalidPotential(String),
    #[error("parameter out of range: {0}")]
    InvalidParameter(String),
    #[error("point {0:?} lies outside the domain")]
    OutsideDomain(Vec<f64>),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },
    #[error("singular linear system at row {0}")]
    SingularSystem(usize),
    #[error("invalid candidate set sequence: {0}")]
    InvalidSetSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
