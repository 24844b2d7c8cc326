use std::path::PathBuf;

use thiserror::Error;

/// Exit code for a usage, parse or validation problem.
pub const EXIT_ERROR: i32 = 1;
/// Exit code when no equilibrium was found.
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}:{column}: {}{detail}", path.display(), member.as_ref().map(|m| format!("at {m}: ")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        member: Option<String>,
        detail: String,
    },
    #[error("{}: invalid game: {source}", path.display())]
    Validation {
        path: PathBuf,
        #[source]
        source: vetotalk_core::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] vetotalk_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(vetotalk_core::Error::NoPartitionalEquilibrium) => EXIT_UNRESOLVED,
            _ => EXIT_ERROR,
        }
    }
}
