use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: &'static str, reason: String },

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("simulation stalled at t={time:.1}s: {detail}")]
    Deadlock { time: f64, detail: String },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("prediction requested from an empty surrogate archive")]
    EmptyArchive,

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        field,
        reason: reason.into(),
    }
}
