use std::path::PathBuf;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const CAP_EXCEEDED: i32 = 3;
    pub const VIOLATION: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] solyanik_core::Error),
    #[error("property violated: {0}")]
    Violation(String),
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Core(e) if e.is_cap_exceeded() => exit::CAP_EXCEEDED,
            CliError::Violation(_) => exit::VIOLATION,
            _ => exit::INVALID_INPUT,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
