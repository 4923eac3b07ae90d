use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("simulation failed during {stage}: {source}")]
    Simulation {
        stage: &'static str,
        #[source]
        source: hystlab_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl CliError {
    pub fn simulation(stage: &'static str) -> impl FnOnce(hystlab_core::Error) -> CliError {
        move |source| CliError::Simulation { stage, source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Spec(_) => 2,
            CliError::Simulation { .. } | CliError::Write { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
