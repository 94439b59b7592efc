use thiserror::Error;

/// CLI failures, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// `--help` or `--version`: printed to stdout, exit 0.
    #[error("{0}")]
    Help(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] wva_core::Error),

    /// The solver ran but no design meets the constraints. The artifact is still written.
    #[error("no design in the search space meets the constraints")]
    Infeasible,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Core(wva_core::Error::FitFailure { .. }) => 4,
            CliError::Core(_) => 3,
            CliError::Infeasible => 5,
        }
    }
}
