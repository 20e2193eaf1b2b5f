use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("arity mismatch for {op}: expected {expected}, got {got}")]
    Arity {
        op: &'static str,
        expected: &'static str,
        got: usize,
    },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("operation requires the real line, got {0}")]
    WrongSpace(String),

    #[error("search budget exhausted: {0}")]
    BudgetExceeded(String),

    #[error("ball split chose the inhabited branch but filtering emptied the piece")]
    EmptyPiece,

    #[error("class certificate violated: {0}")]
    ClassViolation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
