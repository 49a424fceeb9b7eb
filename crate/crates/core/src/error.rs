use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// An explicit size guard was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    /// The operation was called in a state it does not support.
    #[error("invalid state: {0}")]
    State(String),
    /// The problem has no solution of the requested kind.
    #[error("no solution: {0}")]
    NoSolution(String),
}

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn state(msg: impl Into<String>) -> Self {
        Error::State(msg.into())
    }
    pub fn no_solution(msg: impl Into<String>) -> Self {
        Error::NoSolution(msg.into())
    }
}
