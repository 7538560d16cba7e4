use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transaction {tx_id}: input amounts sum to zero")]
    ZeroInputSum { tx_id: String },

    #[error("transaction {tx_id}: no {side}")]
    EmptySide { tx_id: String, side: &'static str },

    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: unparseable input: {message}")]
    Format { path: PathBuf, message: String },

    #[error("{path}:{line_no}: malformed edge-list line")]
    MalformedLine { path: PathBuf, line_no: usize },

    #[error("graph is empty")]
    EmptyGraph,

    #[error("target of {target} nodes exceeds graph size {node_count}")]
    TargetTooLarge { target: usize, node_count: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{what} needs exact computation on {node_count} nodes; limit is {limit}")]
    GraphTooLargeForExact {
        what: &'static str,
        node_count: usize,
        limit: usize,
    },

    #[error("unreachable pair encountered with largest-component restriction disabled")]
    DisconnectedInput,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate variance: {0}")]
    DegenerateVariance(String),

    #[error("requested {m} edges but a simple graph on {n} nodes holds at most {max}")]
    TooManyEdges { n: usize, m: usize, max: usize },

    #[error("invalid lattice degree {degree} for {n} nodes (must be even and < n)")]
    InvalidDegree { n: usize, degree: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("graph with {node_count} nodes exceeds the kernel size cap {cap}")]
    GraphTooLarge { node_count: usize, cap: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
