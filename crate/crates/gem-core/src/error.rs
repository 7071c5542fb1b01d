use thiserror::Error;

/// Errors raised by the model, solver, oracle and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GemError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("stability bound violated: dt * max|detuning| = {product:.4} > {limit}")]
    Unstable { product: f64, limit: f64 },

    #[error("non-finite polarization at t = {t}, z index {z_index}")]
    NonFinite { t: f64, z_index: usize },

    #[error("solution diverged at t = {t}: stored excitation exceeds the delivered input energy")]
    Diverged { t: f64 },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("gamma function pole at s = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("history too short: requested t = {requested}, history ends at {available}")]
    HistoryTooShort { requested: f64, available: f64 },

    #[error("frequency grid hits a singular point at omega = {0}")]
    SingularGrid(f64),

    #[error("contradictory settings: {0}")]
    Contradictory(String),

    #[error("{location}: {reason}")]
    Config { location: String, reason: String },
}

impl GemError {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        GemError::InvalidParameter { name, reason: reason.into() }
    }

    /// True for problems with the requested setup rather than with a computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            GemError::InvalidParameter { .. } | GemError::Unstable { .. } | GemError::Contradictory(_) | GemError::Config { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, GemError>;
