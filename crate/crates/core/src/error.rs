use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of an operation (e.g. `c <= 2`, odd degree sum).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive computation would exceed its size guard.
    #[error("limit exceeded: {0}")]
    Limit(String),

    /// Rejection sampling gave up. `accepted` is always zero here but the
    /// attempt count is kept so callers can report the empirical rate.
    #[error("gave up after {attempts} attempts ({accepted} accepted)")]
    RetryExhausted { attempts: u64, accepted: u64 },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn limit(msg: impl Into<String>) -> Self {
        Error::Limit(msg.into())
    }

    /// Short machine-readable tag used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Limit(_) => "limit",
            Error::RetryExhausted { .. } => "retry_exhausted",
            Error::Internal(_) => "internal",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
