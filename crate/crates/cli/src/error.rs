use std::fmt;

use fincorr::fincat::InvalidCategory;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: String,
    pub line: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.file, self.line)
    }
}

/// Everything that makes an invocation an input error (exit status 2).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{location}: parse error: {message}")]
    Parse { location: Location, message: String },
    #[error("{location}: {message}")]
    Schema { location: Location, message: String },
    #[error("{location}: category `{name}`: {error}")]
    InvalidCategory {
        location: Location,
        name: String,
        error: InvalidCategory,
    },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(location: &Location, message: impl Into<String>) -> Self {
        CliError::Parse {
            location: location.clone(),
            message: message.into(),
        }
    }

    pub fn schema(location: &Location, message: impl Into<String>) -> Self {
        CliError::Schema {
            location: location.clone(),
            message: message.into(),
        }
    }
}
