use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{message} (at {pointer:?})")]
    Validation { pointer: String, message: String },
    #[error(transparent)]
    Core(#[from] compacta::Error),
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn invalid(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 3,
            CliError::Core(compacta::Error::BudgetExceeded(_)) => 2,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Validation { pointer, message } => json!({
                "error": { "kind": "validation", "pointer": pointer, "message": message }
            }),
            CliError::Core(e) => json!({
                "error": { "kind": core_kind(e), "message": e.to_string() }
            }),
            CliError::Io(e) => json!({
                "error": { "kind": "io", "message": e.to_string() }
            }),
        }
    }
}

fn core_kind(e: &compacta::Error) -> &'static str {
    use compacta::Error::*;
    match e {
        Parse(_) => "parse",
        Precondition(_) => "precondition",
        Arity { .. } => "arity",
        SpaceMismatch { .. } => "space_mismatch",
        WrongSpace(_) => "wrong_space",
        BudgetExceeded(_) => "budget_exceeded",
        EmptyPiece => "empty_piece",
        ClassViolation(_) => "class_violation",
    }
}
