use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("capacity exceeded: {requested} qubits requested, at most {limit} supported")]
    Capacity { requested: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parameter shape error: {0}")]
    Shape(String),

    #[error("pattern mismatch: {0}")]
    Pattern(String),

    #[error("cannot compile {pauli}: {reason}")]
    Compilation { pauli: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown preset `{name}`; valid presets: {valid}")]
    UnknownPreset { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
