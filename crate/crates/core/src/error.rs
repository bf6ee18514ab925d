use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("degenerate critical point near q = {location}: {detail}")]
    Degenerate { location: f64, detail: String },
    #[error("parallel curves: intersection count undefined")]
    Parallel,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource limit exceeded: {message}")]
    Resource {
        message: String,
        /// `(n, value)` pairs computed before the limit was hit.
        partial: Vec<(usize, f64)>,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
