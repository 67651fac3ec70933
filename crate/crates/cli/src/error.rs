use std::io;
use std::path::PathBuf;

use acsusy_core::{AlgebraError, ConfigError, GridError, GroundStateError, SpectrumError, UnitsError};
use thiserror::Error;

use crate::config::ConfigFileError;

/// Exit status for configuration and usage errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    ConfigFile(#[from] ConfigFileError),
    #[error("invalid argument {flag}: {message}")]
    Argument { flag: &'static str, message: String },
    #[error("{context}: {source}")]
    Numerical { context: &'static str, source: NumericalError },
    #[error("invalid output: {message}")]
    Output { message: String },
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Error)]
pub enum NumericalError {
    #[error(transparent)]
    Units(#[from] UnitsError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    GroundState(#[from] GroundStateError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ConfigFile(_) | CliError::Argument { .. } => EXIT_CONFIG,
            CliError::Numerical { source: NumericalError::Config(_) | NumericalError::Units(_), .. } => EXIT_CONFIG,
            CliError::Numerical { .. } | CliError::Output { .. } | CliError::Io { .. } => EXIT_NUMERICAL,
        }
    }

    pub fn argument(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Argument { flag, message: message.into() }
    }
}

/// Attaches a context label to a module error.
pub trait Context<T> {
    fn context(self, context: &'static str) -> Result<T, CliError>;
}

impl<T, E: Into<NumericalError>> Context<T> for Result<T, E> {
    fn context(self, context: &'static str) -> Result<T, CliError> {
        self.map_err(|e| CliError::Numerical { context, source: e.into() })
    }
}
