use thiserror::Error;

/// Errors produced anywhere in the simulator and the estimate lab.
#[derive(Debug, Error)]
pub enum QzError {
    /// A configuration or argument check failed. `field` names the offending input.
    #[error("invalid `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// An inverse symbol was applied to a field with a nonzero mean.
    #[error("{operator} requires a zero-mean input (|c_0| = {zero_mode:e})")]
    NonZeroMean { operator: &'static str, zero_mode: f64 },

    /// Non-finite values appeared during time stepping.
    #[error("blow-up at t = {t}: {detail}")]
    BlowUp { t: f64, detail: String },

    /// A hypothesis of one of the estimate routines is not satisfied.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge at tau = {tau}, xi = {xi}: {detail}")]
    Quadrature { tau: f64, xi: f64, detail: String },

    /// A root bracket could not be established.
    #[error("root bracketing failed: {0}")]
    Bracket(String),

    #[error("checkpoint format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl QzError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        QzError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, QzError>;
