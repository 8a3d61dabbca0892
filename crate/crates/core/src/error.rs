use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("scalar mode mismatch: {context}")]
    ScalarModeMismatch { context: &'static str },

    #[error("{what} must not be empty")]
    Empty { what: &'static str },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("DIMACS parse error at line {line}: {msg}")]
    Dimacs { line: usize, msg: String },

    #[error("{what} exceeds cap {limit} (requested {requested})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        requested: usize,
    },

    #[error("invalid traversal: {0}")]
    InvalidTraversal(String),

    #[error("non-finite coordinate encountered")]
    NonFinite,

    #[error("operation requires {0} scalar mode")]
    WrongMode(&'static str),

    #[error("malformed {what}: {msg}")]
    Format { what: &'static str, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
