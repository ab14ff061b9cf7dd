//! Error classes mapped onto process exit codes.

use landmod::analysis::AnalysisError;
use landmod::landscape::LandscapeError;
use landmod::models::ModelError;

/// Process exit codes: 0 success, 1 assertion failure, 2 configuration
/// error, 3 numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    AssertionFailed = 1,
    ConfigError = 2,
    NumericalError = 3,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, bad input files, unwritable outputs.
    Config(String),
    /// A checked inequality did not hold.
    Assertion(String),
    /// Quadrature, eigensolve, or reversibility failure.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Config(_) => ExitCode::ConfigError,
            Self::Assertion(_) => ExitCode::AssertionFailed,
            Self::Numerical(_) => ExitCode::NumericalError,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Self::Config(msg.into())
    }

    pub fn assertion(msg: impl Into<String>) -> Self {
        Self::Assertion(msg.into())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Assertion(m) => write!(f, "assertion failed: {m}"),
            Self::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Config(format!("io: {e}"))
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        Self::Config(e.to_string())
    }
}

impl From<LandscapeError> for CliError {
    fn from(e: LandscapeError) -> Self {
        match e {
            LandscapeError::Quadrature { .. } => Self::Numerical(e.to_string()),
            _ => Self::Config(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Model(m) => m.into(),
            AnalysisError::Landscape(l) => l.into(),
            AnalysisError::Degenerate => Self::Config(e.to_string()),
            AnalysisError::PathEnumerationTooLarge { .. } => Self::Config(e.to_string()),
            AnalysisError::NotReversible { .. }
            | AnalysisError::Eigen { .. }
            | AnalysisError::MissingZeroMode { .. }
            | AnalysisError::NotMonotone { .. } => Self::Numerical(e.to_string()),
        }
    }
}
