use std::fmt;

/// Failures surfaced to the shell. Validation problems (bad parameters,
/// malformed scenarios) exit with 2, I/O problems with 1.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl From<cca_transport::Error> for CliError {
    fn from(err: cca_transport::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
