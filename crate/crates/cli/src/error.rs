use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{n} states exceed the enumeration cap of {cap}; run `emergence greedy` instead or raise --max-states")]
    CapExceeded { n: usize, cap: usize },
    #[error("{failed} of {total} sweep runs failed")]
    PartialSweep { failed: usize, total: usize },
    #[error(transparent)]
    Core(emergence_core::Error),
}

impl From<emergence_core::Error> for CliError {
    fn from(e: emergence_core::Error) -> Self {
        match e {
            emergence_core::Error::CapExceeded { n, cap } => CliError::CapExceeded { n, cap },
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CapExceeded { .. } => 3,
            CliError::PartialSweep { .. } => 4,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
