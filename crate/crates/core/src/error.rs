use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {left} vs {right} coordinates")]
    DimensionMismatch { left: usize, right: usize },

    #[error("integrand is not finite at x = {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    #[error(
        "quadrature budget of {budget} evaluations exhausted \
         (partial value {value}, error estimate {error_estimate})"
    )]
    BudgetExceeded {
        budget: usize,
        value: f64,
        error_estimate: f64,
    },

    #[error("decay hint {hint} violated: integrand not small enough at s = {s}; a larger truncation point is required")]
    DecayHintViolated { hint: f64, s: f64 },

    #[error("no sign change on [{lo}, {hi}] (g(lo) = {g_lo}, g(hi) = {g_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("ODE step size underflow at s = {s}")]
    StepUnderflow { s: f64 },

    #[error("profile radicand negative ({value}) at s = {s}")]
    NegativeRadicand { s: f64, value: f64 },

    /// Two algebraically equal expressions disagree; the trajectory drifted.
    #[error("consistency check failed at s = {s}: {detail}")]
    Drift { s: f64, detail: String },

    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

impl Error {
    /// True for errors caused by bad arguments rather than by a numerical failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::InvalidInput(_) | Error::DimensionMismatch { .. }
        )
    }
}
