use thiserror::Error;

/// Errors produced by the library. Budget and fragment errors are
/// recoverable conditions a caller can act on; the rest are input faults.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },
    #[error("arity {arity} out of range (max {max})")]
    Arity { arity: usize, max: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("relation {relation} is not in the {fragment} fragment")]
    Fragment { fragment: String, relation: String },
    #[error("unknown clone label {0}")]
    UnknownClone(String),
    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },
    #[error("malformed circuit: {0}")]
    Circuit(String),
    #[error("function is not monotone: f({lo:#b}) = 1 but f({hi:#b}) = 0")]
    NotMonotone { lo: u64, hi: u64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("catalog validation failed: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command-line front end: 3 for budget
    /// and fragment errors, 2 for every input fault.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget { .. } | Error::Fragment { .. } => 3,
            _ => 2,
        }
    }
}
