use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expansion directions differ")]
    DirectionMismatch,
    #[error("truncation mismatch: {0}")]
    TruncationMismatch(String),
    #[error("element is not a unit: {0}")]
    NotUnit(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("mode index {index} escapes the window (limit {limit})")]
    WindowEscape { index: i64, limit: i64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("incompatible cache: {0}")]
    IncompatibleCache(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
