use thiserror::Error;

/// Failures surfaced to the command line, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Numerical(_) => 4,
            CliError::Io(_) => 5,
        }
    }
}

impl From<tricritical::Error> for CliError {
    fn from(e: tricritical::Error) -> Self {
        use tricritical::Error as E;
        match e {
            E::Domain(m) => CliError::Domain(m),
            E::Config(m) => CliError::Usage(m),
            e @ (E::Instability { .. } | E::Internal(_)) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
