use thiserror::Error;

/// Errors raised by the library and surfaced by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A letter id or symbol that does not belong to the alphabet in use.
    #[error("letter `{0}` is not in the alphabet")]
    Domain(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// An internal consistency check failed. Always a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("defect reduction failed for image set {0}")]
    DefectReduction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
