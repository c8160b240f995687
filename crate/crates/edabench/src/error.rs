//! Crate-wide error type.

use std::fmt;

#[derive(Debug)]
pub enum EdaError {
    /// Rejected parameters, malformed identifiers, or inconsistent configs.
    InvalidInput(String),
    /// Malformed file contents, with the 1-based line number.
    Parse { line: usize, message: String },
    /// I/O failure while reading or writing artifacts.
    Io(std::io::Error),
    /// A run or pipeline stage failed at execution time.
    Execution(String),
}

impl EdaError {
    pub fn invalid(message: impl Into<String>) -> Self {
        EdaError::InvalidInput(message.into())
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        EdaError::Parse {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for EdaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdaError::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            EdaError::Parse { line, message } => write!(f, "line {line}: {message}"),
            EdaError::Io(err) => write!(f, "i/o error: {err}"),
            EdaError::Execution(msg) => write!(f, "execution failed: {msg}"),
        }
    }
}

impl std::error::Error for EdaError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            EdaError::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for EdaError {
    fn from(err: std::io::Error) -> Self {
        EdaError::Io(err)
    }
}

pub type Result<T> = std::result::Result<T, EdaError>;
