use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

/// Process exit status of each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Invariant = 1,
    Io = 2,
    Infeasible = 3,
    Usage = 64,
    Parse = 65,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("cannot parse {path}: {msg}")]
    Parse { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("infeasible: requested Delta_H = {requested:.6} bits, max achievable Delta_H_bar = {max_achievable:.6} bits")]
    Infeasible { requested: f64, max_achievable: f64 },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Core(#[from] decompq_core::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            Self::Usage(_) => Status::Usage,
            Self::Parse { .. } => Status::Parse,
            Self::Io { .. } => Status::Io,
            Self::Infeasible { .. } => Status::Infeasible,
            Self::Invariant(_) => Status::Invariant,
            Self::Core(decompq_core::Error::Validation(_)) => Status::Usage,
            Self::Core(_) => Status::Invariant,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
