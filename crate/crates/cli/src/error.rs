use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] ion_cnot::Error),

    /// At least one row failed while `--strict` was set; the table itself
    /// has already been written.
    #[error("{failed} row(s) failed under --strict (first: {first})")]
    StrictRows {
        failed: usize,
        first: ion_cnot::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 0 success, 1 validation failure or i/o, 2 usage, 3 domain, 4 no solution.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) | CliError::StrictRows { first: e, .. } => core_code(e),
            CliError::Validation(_) | CliError::Io(_) | CliError::Csv(_) => 1,
        }
    }
}

fn core_code(e: &ion_cnot::Error) -> i32 {
    match e {
        ion_cnot::Error::NoSolution { .. } => 4,
        _ => 3,
    }
}
