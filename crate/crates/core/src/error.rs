use thiserror::Error;

use crate::matrix::Position;

/// Errors raised by the library. The CLI maps each class to an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed matrix text, pattern word, path file or permutation list.
    #[error("format error at line {line}{}: {message}", .column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Format { line: usize, column: Option<usize>, message: String },

    /// Arguments outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates a documented precondition (for example, it already contains the pattern).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A procedure that should always succeed got stuck.
    #[error("structural error at ({position}): {message}")]
    Structural { position: Position, message: String },

    /// A size cap on an exhaustive search was exceeded.
    #[error("resource cap exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub(crate) fn format(message: impl Into<String>) -> Self {
        Error::Format { line: 1, column: None, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
