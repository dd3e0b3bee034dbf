use thiserror::Error;

/// Errors raised by the analytic, sampling and experiment layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow while computing {0}")]
    Overflow(String),

    #[error("budget exceeded: {what} needs {required}, limit is {limit}")]
    Budget {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("series tolerance {tolerance:e} not reached, best certified bound {best_bound:e}")]
    Tolerance { tolerance: f64, best_bound: f64 },

    #[error("root not bracketed in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("truncation certificate {certificate:e} above ceiling {ceiling:e}; increase the padding radius")]
    Certificate { certificate: f64, ceiling: f64 },

    #[error("sequence not Cauchy within {tolerance}: {trace:?}")]
    NotConverged { tolerance: f64, trace: Vec<(u64, f64)> },

    #[error("replicate {index} failed: {source}")]
    Replicate {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown suite `{name}`; available: {available}")]
    UnknownSuite { name: String, available: String },

    #[error("io: {0}")]
    Io(String),

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors caused by bad user input rather than runtime limits.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_) | Error::Config(_) | Error::UnknownSuite { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
