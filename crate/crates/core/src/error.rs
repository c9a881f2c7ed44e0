use thiserror::Error;

/// Errors produced anywhere in the evaluation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation point a={a} lies within {eps} of the light cone a={cone}")]
    LightConeProximity { a: f64, cone: f64, eps: f64 },

    #[error("quadrature did not reach tolerance {tol:e} within {halfperiods} half-periods (estimate {est_err:e})")]
    NoConvergence { tol: f64, est_err: f64, halfperiods: usize },

    #[error("static force vanishes; relative difference undefined")]
    DivisionByZero,

    #[error("trace analysis needs at least {needed} rows, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("malformed table: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
