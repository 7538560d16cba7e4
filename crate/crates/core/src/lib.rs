//! Transaction-network analysis: construct weighted directed graphs from
//! multi-input/multi-output transactions, sample them, measure them, and score
//! how faithfully a sample preserves the original.

pub mod error;
pub mod evaluation;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod reference;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use graph::{
    build_graph, expand_transaction, DegreeMode, GraphBuilder, NodeId, TransactionRecord,
    WeightedDigraph, WeightedEdge,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
