use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("{what} is {value}, exceeding the cap of {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("expected a {expected}, found a {found}")]
    KindMismatch { expected: &'static str, found: &'static str },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Domain(msg.into()))
}

pub(crate) fn hypothesis<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Hypothesis(msg.into()))
}

pub(crate) fn check_cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(LabError::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
