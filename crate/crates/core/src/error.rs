use thiserror::Error;

use crate::graph::{EdgeId, Vertex};

/// Everything that can go wrong in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex set is empty")]
    EmptySet,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("chain is stale: the coloring changed since it was extracted")]
    StaleChain,
    #[error("color {0} appears on the boundary")]
    BoundaryColorPresent(usize),
    #[error("tree is not closed")]
    NotClosed,
    #[error("engine invariant violated: {0}")]
    EngineInvariantViolation(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("instance too large for the oracle: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("edge {0} is out of range")]
    BadEdge(EdgeId),
    #[error("vertex {0} is out of range")]
    BadVertex(Vertex),
    #[error("color {color} is not usable on edge {edge}")]
    BadColor { edge: EdgeId, color: usize },
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
