use thiserror::Error;

/// Errors raised across the library.
///
/// `Validation` covers bad inputs caught before any numerics run; every other
/// variant is a numerical failure.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    Validation(String),

    #[error("factor index {index} out of range for {factors} factor(s)")]
    FactorOutOfRange { index: usize, factors: usize },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("pole of the T-Q relation at u = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("unphysical root configuration: {0}")]
    Unphysical(String),

    #[error("{0}")]
    Numerical(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::FactorOutOfRange { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
