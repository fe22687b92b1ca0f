use thiserror::Error;

use crate::factorization::FactorStats;

#[derive(Debug, Error)]
pub enum DcrError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration or recursion cap was hit. `partial` carries the
    /// factoring statistics gathered before the abort, when there are any.
    #[error("resource limit exceeded: {what} (cap {cap}){}", hint.as_deref().map(|h| format!("; {h}")).unwrap_or_default())]
    ResourceLimit {
        what: String,
        cap: u64,
        hint: Option<String>,
        partial: Option<Box<FactorStats>>,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl DcrError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        DcrError::InvalidArgument(msg.into())
    }

    pub(crate) fn limit(what: impl Into<String>, cap: u64) -> Self {
        DcrError::ResourceLimit {
            what: what.into(),
            cap,
            hint: None,
            partial: None,
        }
    }
}

pub type Result<T, E = DcrError> = std::result::Result<T, E>;
