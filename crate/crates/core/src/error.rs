use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition was violated; `constraint` names the violated condition.
    #[error("domain error: {detail} (constraint: {constraint})")]
    Domain {
        constraint: &'static str,
        detail: String,
    },
    /// A Frobenius recursion hit a nonzero resonance obstruction.
    #[error("log-term required: resonance obstruction {obstruction:.3e} at order {order} (constraint: {constraint})")]
    LogTermRequired {
        order: usize,
        obstruction: f64,
        constraint: &'static str,
    },
    #[error("unbalanceable: {0}")]
    Unbalanceable(String),
    /// A post-construction identity check failed.
    #[error("consistency check failed: {what} (defect {defect:.3e})")]
    Consistency { what: &'static str, defect: f64 },
    #[error("degenerate frame: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(constraint: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            constraint,
            detail: detail.into(),
        }
    }

    /// Short machine-readable tag used in CLI and FFI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::LogTermRequired { .. } => "log_term_required",
            Error::Unbalanceable(_) => "unbalanceable",
            Error::Consistency { .. } => "consistency",
            Error::Degenerate(_) => "degenerate",
            Error::Parse(_) | Error::Json(_) => "parse",
            Error::Io(_) => "io",
        }
    }

    pub fn constraint(&self) -> Option<&'static str> {
        match self {
            Error::Domain { constraint, .. } | Error::LogTermRequired { constraint, .. } => {
                Some(constraint)
            }
            _ => None,
        }
    }
}
