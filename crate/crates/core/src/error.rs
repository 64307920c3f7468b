use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{value} is not a perfect square")]
    NotPerfectSquare { value: String },

    #[error("eigensolver did not converge for order {order} (worst interval width {width:e})")]
    NoConvergence { order: usize, width: f64 },

    #[error("de Boor-Golub breakdown at step {step}: {reason}")]
    Breakdown { step: usize, reason: String },

    #[error("time step {dt} exceeds the stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
