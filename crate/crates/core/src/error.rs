use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QcdError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative procedure stopped before reaching its tolerance.
    #[error("{what} did not converge (residual {residual:.3e}, tolerance {tolerance:.3e})")]
    Convergence {
        what: &'static str,
        residual: f64,
        tolerance: f64,
    },

    /// A two-valued inverse was evaluated where both branches are admissible.
    #[error("branch ambiguity: both {first} and {second} are valid preimages")]
    BranchAmbiguity { first: Complex64, second: Complex64 },

    /// A numerical estimate is unusable (non-finite, non-positive Jacobian, ...).
    #[error("numeric error: {0}")]
    Numeric(String),
}

impl QcdError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QcdError::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        QcdError::Numeric(msg.into())
    }

    /// True for failures caused by an iterative solver rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(self, QcdError::Convergence { .. } | QcdError::Numeric(_))
    }
}

pub type Result<T> = std::result::Result<T, QcdError>;
