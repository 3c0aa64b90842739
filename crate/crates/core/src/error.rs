use thiserror::Error;

/// Errors produced by structure construction, parsing and the search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("vertex {vertex} out of range for a structure on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("tuple of length {len} in slot {slot} of arity {arity}")]
    ArityMismatch {
        slot: usize,
        arity: usize,
        len: usize,
    },

    #[error("not a graph: {0}")]
    NotAGraph(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("{what} limit of {limit} exceeded")]
    LimitExceeded { what: &'static str, limit: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for resource-guard failures, which never indicate a wrong answer.
    pub fn is_limit(&self) -> bool {
        matches!(self, Error::LimitExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
