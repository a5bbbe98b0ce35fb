use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid strategy profile: {0}")]
    InvalidProfile(String),

    #[error("no root for {what}: {detail}")]
    NoRoot { what: &'static str, detail: String },

    #[error("adversary set is empty")]
    EmptyAdversarySet,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Iterative solver gave up. `residuals` are the last evaluated KKT residuals.
    #[error("no convergence after {iterations} iterations (max residual {max_residual:e})")]
    NonConvergence {
        iterations: usize,
        max_residual: f64,
        residuals: Vec<f64>,
    },

    #[error("guarded denominator collapsed: {detail}")]
    SingularDenominator { detail: String, residuals: Vec<f64> },

    /// The adversary budget is large enough to cancel the transmitted signal
    /// entirely, so every transmitter strategy costs the prior variance.
    #[error("adversary can null the transmitted signal (cost is the prior variance)")]
    AdversaryDominates,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    /// True for failures of an iterative solver, as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. }
                | Error::SingularDenominator { .. }
                | Error::AdversaryDominates
                | Error::NoRoot { .. }
                | Error::NumericalFailure(_)
        )
    }

    /// Residual diagnostics carried by the error, if any.
    pub fn residuals(&self) -> &[f64] {
        match self {
            Error::NonConvergence { residuals, .. } | Error::SingularDenominator { residuals, .. } => residuals,
            _ => &[],
        }
    }
}
