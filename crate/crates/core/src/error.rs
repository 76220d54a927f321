use thiserror::Error;

use crate::power_series::Variable;

pub type Result<T> = std::result::Result<T, TfError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TfError {
    #[error("series in {left:?} cannot be combined with a series in {right:?}")]
    VariableMismatch { left: Variable, right: Variable },

    #[error("constant term is zero, the power series of f^beta is undefined")]
    ZeroConstantTerm,

    #[error("negative constant term {0} cannot be raised to a non-integer power")]
    NegativeConstantTerm(f64),

    #[error("requested order {requested} but only {available} is available")]
    OrderOutOfRange { requested: usize, available: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{what} = {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("no zero crossing of the screening function below x = {x_max} (neutral or sub-critical slope a = {a})")]
    NoCrossing { a: f64, x_max: f64 },

    #[error("root bracket failure: {0}")]
    BracketFailure(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
}

impl TfError {
    /// True for failures of an iterative numerical method, as opposed to bad
    /// input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            TfError::NonConvergence { .. } | TfError::BracketFailure(_) | TfError::NonFinite(_)
        )
    }
}
