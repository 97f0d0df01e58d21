use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot access {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Core(#[from] everett_core::Error),
    #[error("serialization error: {0}")]
    Serialize(String),
}

impl CliError {
    /// 0 success, 2 config error, 3 I/O error, 4 resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } | CliError::Serialize(_) => 3,
            CliError::Core(e) if e.is_resource_cap() => 4,
            CliError::Core(_) => 2,
        }
    }
}

pub(crate) fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
