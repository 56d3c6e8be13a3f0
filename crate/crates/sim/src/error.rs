use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// Rejected flag value or experiment configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Model(#[from] beg_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error(
        "bracket [{lo}, {hi}] does not straddle target {target} \
         (unstable fractions {f_lo} and {f_hi})"
    )]
    NoStraddle {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
        target: f64,
    },

    #[error("snapshot: {0}")]
    Snapshot(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl SimError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        SimError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 for usage errors, 2 for everything that went
    /// wrong while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            SimError::Config(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = SimError> = std::result::Result<T, E>;
