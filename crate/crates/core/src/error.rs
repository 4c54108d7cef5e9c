use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("not a state: eigenvalue {0:e} below tolerance")]
    NotAState(f64),

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("requested entropy reduction {requested} bits is infeasible; max achievable is {max_achievable} bits")]
    Infeasible { requested: f64, max_achievable: f64 },

    #[error("quadrature failed to reach tolerance {0:e}")]
    QuadratureFailure(f64),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
