use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty interval: lower endpoint {lo} is not below upper endpoint {hi}")]
    EmptyInterval { lo: String, hi: String },

    #[error("interval length must be positive, got {0}")]
    NonPositiveDelta(String),

    #[error("argument outside the domain of {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("no resonance found with ||p||_1 <= {cap}; raise the shell cap")]
    CapExceeded { cap: u64 },

    #[error("operation requires a non-empty sample batch")]
    EmptyBatch,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot parse {input:?} as an exact rational: {reason}")]
    Parse { input: String, reason: String },

    #[error("degenerate regression: {0}")]
    Regression(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
