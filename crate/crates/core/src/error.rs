use thiserror::Error;

pub type Result<T> = std::result::Result<T, HatError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HatError {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl HatError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HatError::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        HatError::Precondition(msg.into())
    }
}
