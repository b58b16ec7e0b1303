use thiserror::Error;

/// Position magnitude beyond which a path is declared diverged and aborted.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The uncontrolled (or undercontrolled) system blew past the divergence
    /// guard; the sample carries infinite cost and is reported separately.
    #[error("trajectory diverged (|q| > 1e12) at t = {time}")]
    Diverged { time: f64 },

    #[error("strategy contract violation at t = {time}: {detail}")]
    ContractViolation { time: f64, detail: String },

    #[error("estimation failed: {0}")]
    EstimationFailed(String),

    #[error("unknown claim id: {0}")]
    UnknownClaim(String),

    #[error("unknown strategy spec: {0}")]
    UnknownStrategy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type SimResult<T> = Result<T, SimError>;

impl SimError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        SimError::InvalidArgument(msg.into())
    }
}
