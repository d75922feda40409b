use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    /// Elimination found no usable pivot at the given (0-based) column stage.
    #[error("singular matrix: vanishing pivot at elimination stage {stage}")]
    Singular { stage: usize },

    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,

    #[error("graph is not connected")]
    Disconnected,

    #[error("not minimal: (-1)-curve at vertex {0}")]
    NotMinimal(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("bounds exceeded: {0}")]
    Bounds(String),

    #[error("cycle is not integral")]
    NonIntegral,

    #[error("internal assertion failed: {0}")]
    Assertion(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
