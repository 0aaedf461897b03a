use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario schema violation at `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("geometry violation: {0}")]
    Geometry(String),

    #[error("duplicate goal id `{0}`")]
    DuplicateGoal(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("unknown agent `{0}`")]
    UnknownAgent(String),

    #[error("agent `{id}` is not a {expected}")]
    WrongRole { id: String, expected: &'static str },

    #[error("expected {expected} outcomes, got {actual}")]
    OutcomeCount { expected: usize, actual: usize },

    #[error("preset `{0}` is not a multi-human scenario")]
    NotMultiHuman(String),

    #[error("malformed trace: {0}")]
    MalformedTrace(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
