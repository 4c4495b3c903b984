use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: domain error: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("root finder did not converge after {sweeps} sweeps (worst residual {worst_residual:.3e})")]
    NoConvergence { sweeps: usize, worst_residual: f64 },

    #[error("coincident zeros at indices {0} and {1}")]
    CoincidentZeros(usize, usize),

    #[error("quadrature failed: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    Quadrature { estimate: f64, tolerance: f64 },

    #[error("oval tracing failed: {0}")]
    Tracing(String),

    #[error("invalid coupling sequence: {0}")]
    InvalidSequence(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain {
            op,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
