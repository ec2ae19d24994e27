use thiserror::Error;

/// Errors raised by curve construction, geometry queries and searches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no termination after {iterations} iterations: {detail}")]
    NonTermination { iterations: usize, detail: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
