use num_complex::Complex64;
use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge after {terms} terms (last term magnitude {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },

    #[error("evaluation at singular point {0}")]
    Singularity(Complex64),

    #[error("no root in scan bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("characteristic map stays injective up to t = {t_max}")]
    NoShock { t_max: f64 },

    #[error("field does not decay at the grid boundary (relative edge magnitude {edge:e})")]
    DecayViolation { edge: f64 },

    #[error("hamiltonian is negative (H = {value}) at J = {action}")]
    NegativeH { action: f64, value: f64 },

    #[error("q-exponential factor vanishes at J = {action}")]
    SingularH { action: f64 },

    #[error("root polishing stalled at t = {t} (residual {residual:e})")]
    RootPolish { t: f64, residual: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures caused by running out of iterations rather than bad input.
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::RootPolish { .. } | Error::NoRoot { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
