use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("no table column matches {0}")]
    NoMatchingColumn(String),
    #[error("layout overflow: {0}")]
    LayoutOverflow(String),
    #[error("rate is undefined for a failed simulation")]
    Undefined,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("no common code found: {0}")]
    NoCode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
