use thiserror::Error;

/// Errors raised across the material, assembly and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown material `{0}`")]
    UnknownMaterial(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("{method} did not converge within {iterations} iterations (last change {last_change:.3e})")]
    NotConverged {
        method: &'static str,
        iterations: usize,
        last_change: f64,
    },

    #[error("mode tracking failed: best shape correlation {correlation:.3} is below {threshold}")]
    TrackingFailure { correlation: f64, threshold: f64 },

    #[error("non-physical mode: {0}")]
    NonPhysical(String),

    #[error("only {found} elastic modes available, {requested} requested")]
    TooFewModes { requested: usize, found: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
