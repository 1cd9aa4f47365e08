use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: malformed input near `{token}`: {reason}")]
    Malformed {
        line: usize,
        token: String,
        reason: String,
    },

    #[error("line {line}: duplicate identifier `{id}`")]
    DuplicateIdentifier { line: usize, id: String },

    #[error("line {line}: unknown vertex `{id}`")]
    UnknownVertex { line: usize, id: String },

    #[error("graph has sinks: {}", .0.join(", "))]
    Sinks(Vec<String>),

    #[error("graph has sources: {}", .0.join(", "))]
    Sources(Vec<String>),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("depth {requested} is below current depth {current}")]
    DepthBelow { requested: usize, current: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("functions live on different graphs")]
    GraphMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a projection: {0}")]
    NotProjection(String),

    #[error("block trace {0} is not an integer")]
    NonIntegerTrace(String),

    #[error("input is not a bijection: {0}")]
    NotBijection(String),

    #[error("random graph constraints unmet after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
