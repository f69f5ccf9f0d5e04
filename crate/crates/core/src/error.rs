use num_complex::Complex64;
use thiserror::Error;

use crate::qcore::EvalResult;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, Error)]
pub enum QError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {} terms (tail {:.3e})", .0.terms_used, .0.tail_estimate)]
    NotConverged(EvalResult),

    #[error("q-gamma pole at non-positive integer argument {0}")]
    PoleAtNonpositiveInteger(Complex64),

    #[error("zero argument {0} passed to a q-difference quotient")]
    ZeroArgument(Complex64),

    #[error("term ratio undefined at index ({n}, {k})")]
    RatioUndefined { n: usize, k: usize },

    #[error("unknown identity id {0:?}")]
    UnknownIdentity(String),
}

impl QError {
    pub fn domain(msg: impl Into<String>) -> Self {
        QError::Domain(msg.into())
    }

    pub fn is_not_converged(&self) -> bool {
        matches!(self, QError::NotConverged(_))
    }
}

pub type QResult<T> = Result<T, QError>;
