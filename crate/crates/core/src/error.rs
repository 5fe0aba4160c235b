use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed instance or coloring text. Lines are 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// An operation was called outside the range where its result means anything.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search over 2^{requested} seeds exceeds the cost guard of 2^{limit}")]
    CostGuard { requested: u32, limit: u32 },

    #[error("protocol error: {0}")]
    Protocol(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
