use thiserror::Error;

/// Errors produced by curve construction, bandit bookkeeping, the harness
/// and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient observations: need at least {needed}, have {have}")]
    InsufficientObservations { needed: usize, have: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}:{line}: field `{field}`: {message}")]
    ConfigField {
        path: String,
        line: usize,
        field: String,
        message: String,
    },

    #[error("instance too large for exhaustive enumeration: {arms}^{horizon} sequences exceeds {limit}")]
    InstanceTooLarge { arms: usize, horizon: usize, limit: u64 },

    #[error("observed reward {observed} exceeds majorant {majorant} at t = {t}")]
    InvalidMajorant { t: usize, observed: f64, majorant: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
