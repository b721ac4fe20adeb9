use reglab::LabError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

/// Unwraps an option the subcommand cannot run without.
pub fn need<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}
