use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {point:?} lies outside the domain of {function}")]
    Domain { function: String, point: Vec<f64> },

    #[error("unknown simulator `{name}`; valid names are: {}", valid.join(", "))]
    NotFound { name: String, valid: Vec<String> },

    #[error("correlation matrix is numerically singular (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("simulator evaluation failed at {x:?}: {source}")]
    Evaluation {
        x: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
