use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<consonoscope::Error> for CliError {
    fn from(e: consonoscope::Error) -> Self {
        use consonoscope::Error::*;
        match e {
            Usage(_) | InvalidConfig { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}
