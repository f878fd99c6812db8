use std::fmt;
use std::path::PathBuf;

/// Errors raised while loading or validating configuration.
#[derive(Debug)]
pub enum Error {
    /// Underlying I/O failure, with the path that was being read.
    Io { path: PathBuf, source: std::io::Error },
    /// A file did not parse against its documented schema.
    Parse { path: PathBuf, detail: String },
    /// A single line or field of a columnar file is malformed.
    ParseLine { path: PathBuf, line: usize, detail: String },
    /// A loaded value violates a documented invariant.
    Validation(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            Error::Parse { path, detail } => write!(f, "{}: {}", path.display(), detail),
            Error::ParseLine { path, line, detail } => {
                write!(f, "{}:{}: {}", path.display(), line, detail)
            }
            Error::Validation(msg) => write!(f, "validation error: {}", msg),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
