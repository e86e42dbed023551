use std::io;
use std::path::Path;

use thiserror::Error;

/// Failures grouped by exit status: bad configuration, file trouble, or a
/// computation that could not complete.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{stage} failed: {message}")]
    Compute { stage: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 3,
            CliError::Io(_) => 4,
            CliError::Compute { .. } => 5,
        }
    }

    pub fn compute(stage: &'static str, err: impl std::fmt::Display) -> Self {
        CliError::Compute {
            stage,
            message: err.to_string(),
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<rdslab::degseq::DegreeError> for CliError {
    fn from(e: rdslab::degseq::DegreeError) -> Self {
        use rdslab::degseq::DegreeError::*;
        match e {
            Io { .. } | Parse { .. } | BelowOne { .. } | EmptySource | Unsorted { .. } => {
                CliError::Io(e.to_string())
            }
            _ => CliError::compute("degrees", e),
        }
    }
}

impl From<rdslab::graphgen::EdgeListError> for CliError {
    fn from(e: rdslab::graphgen::EdgeListError) -> Self {
        CliError::Io(e.to_string())
    }
}
