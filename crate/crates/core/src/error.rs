use thiserror::Error;

use crate::model::PhaseState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A parameter violates its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("step size underflow at t = {t}: h = {h:e} (state q = {:?}, p = {:?})", state.q.as_slice(), state.p.as_slice())]
    StepSizeUnderflow { t: f64, h: f64, state: PhaseState },

    #[error("maximum number of steps ({max_steps}) exceeded at t = {t}")]
    MaxStepsExceeded { max_steps: usize, t: f64 },

    #[error("quadrature did not reach tolerance {tol:e} (estimated error {estimate:e})")]
    QuadratureTolerance { tol: f64, estimate: f64 },

    #[error("iteration did not converge: {0}")]
    NoConvergence(String),

    /// Physically unsuitable input, e.g. an unbounded orbit handed to a period check.
    #[error("unsuitable configuration: {0}")]
    Unsuitable(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
