use thiserror::Error;

/// Errors raised while building or combining fuzzy processes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("execution universe must contain at least one label")]
    EmptyUniverse,

    #[error("execution labels must be non-empty")]
    EmptyLabel,

    #[error("duplicate execution label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown execution label `{0}`")]
    UnknownLabel(String),

    #[error("membership value {value} is outside [0, 1]{}", label.as_ref().map(|l| format!(" (label `{l}`)")).unwrap_or_default())]
    OutOfRange {
        label: Option<String>,
        value: String,
    },

    #[error("expected {expected} membership values, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unresolved name `{0}`")]
    UnresolvedName(String),

    #[error("operands are defined over different execution universes")]
    UniverseMismatch,

    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),

    #[error("invalid process JSON: {0}")]
    Json(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
