//! Exit-code oriented error type.

/// A failed invocation, split by exit code: a usage error (exit 1) is
/// a malformed request, a data error (exit 2) is a problem with the
/// inputs or the computation itself.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

pub type CliResult<T = ()> = Result<T, CliError>;

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn data(message: impl Into<String>) -> Self {
        CliError::Data(message.into())
    }
}

impl From<lexiprec::error::Error> for CliError {
    fn from(err: lexiprec::error::Error) -> Self {
        CliError::Data(err.to_string())
    }
}
