use thiserror::Error;

/// Errors produced by the model, integrators, root finders and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("solution left the feasible range at t = {t}: x = {x}")]
    InvarianceViolation { t: f64, x: f64 },

    #[error("non-finite value encountered at t = {t}")]
    NonFinite { t: f64 },

    #[error("contour passes too close to a root near {re} + {im}i")]
    BoundaryTooClose { re: f64, im: f64 },

    #[error("root isolation failed: {0}")]
    SubdivisionFailure(String),

    #[error("rho = {rho} is within {tol} of the threshold rho_{j}")]
    DegenerateParameter { rho: f64, j: usize, tol: f64 },

    #[error("curve parameter nu = {0} is at a zero of sin")]
    Singularity(f64),

    #[error("insufficient oscillation: found {found} peaks, need at least 3")]
    InsufficientOscillation { found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
