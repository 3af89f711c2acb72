use thiserror::Error;

use crate::graph::GmReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad user-supplied parameter (non prime power, ambient mismatch, ...).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The parameter is valid in general but outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what}: {count} exceeds the configured budget of {budget}")]
    Budget {
        what: &'static str,
        count: String,
        budget: u64,
    },

    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),

    #[error("Godsil-McKay hypothesis violated: {}", .0.summary())]
    Hypothesis(Box<GmReport>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A construction produced something that contradicts its own definition.
    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}
