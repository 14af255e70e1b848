use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration budget exceeded: need {needed} steps, budget is {budget}")]
    Budget { needed: u128, budget: u128 },
    #[error("value out of range: {0}")]
    Range(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("bundled data is corrupt: {0}")]
    Bundle(String),
    #[error("stopped after {cursor} of {total} parameter vectors; resume with {token}")]
    Suspended { token: String, cursor: u64, total: u64 },
    #[error("network error: {0}")]
    Network(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Tags an error with the pipeline stage it came from.
    pub fn at(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, with stage tags stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}
