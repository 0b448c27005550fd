use thiserror::Error;

/// Errors produced anywhere in the clustering pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("operation requires a symmetric network")]
    RequiresSymmetric,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("axiom violated: {0}")]
    AxiomViolation(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("maximal clique enumeration aborted after {limit} cliques")]
    CliqueLimit { limit: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
