use std::fmt;
use std::path::Path;

use flymation_core::ingest::IngestError;

/// A failure carrying the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments (exit 1).
    Usage(String),
    /// Malformed or invalid scene data (exit 2).
    Data(String),
    /// File system or network failure (exit 3).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}
