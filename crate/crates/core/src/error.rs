use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the interaction algebra and the solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("requested {requested} levels but the discrete problem only holds {available}")]
    Capacity { requested: usize, available: usize },

    #[error("discrete operator is not similar to a symmetric one (off-diagonal product {product:e} at row {row})")]
    NonReal { row: usize, product: f64 },

    #[error("no sign change of the matching function in [{lo}, {hi}]: found {found} of {requested} levels")]
    Bracket {
        lo: f64,
        hi: f64,
        found: usize,
        requested: usize,
    },

    #[error("sector error: {0}")]
    Sector(String),

    #[error("solver inconsistency: {0}")]
    SolverInconsistency(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {value}")))
    }
}
