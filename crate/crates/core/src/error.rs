use thiserror::Error;

/// Errors raised while validating inputs or building an index.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty string cannot be inserted")]
    EmptyString,
    #[error("score must be at least 1, got {0}")]
    InvalidScore(i64),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("invalid rule {lhs:?} -> {rhs:?}: {message}")]
    InvalidRule {
        lhs: String,
        rhs: String,
        message: &'static str,
    },
    #[error("dictionary is empty")]
    EmptyDictionary,
    #[error("enumeration exceeded the limit of {limit} variants")]
    Overflow { limit: usize },
    #[error("alpha must lie in [0, 1], got {0}")]
    InvalidAlpha(f64),
    #[error("unknown rule id {0}")]
    UnknownRule(u32),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
