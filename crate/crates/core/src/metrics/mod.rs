//! Complex-network metrics.
//!
//! Clustering, path length and rich-club coefficients are computed on the
//! undirected projection; closeness, betweenness and assortativity stay
//! directed. Distances are unweighted hop counts throughout.

pub mod assortativity;
pub mod centrality;
pub mod clustering;
pub mod components;
pub mod degree;
pub mod paths;
pub mod powerlaw;
pub mod report;
pub mod richclub;
pub mod smallworld;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, WeightedDigraph};

pub use assortativity::{knn_in_curve, pearson_assortativity, KnnCurve};
pub use centrality::{betweenness, closeness, ClosenessVariant};
pub use clustering::{clustering, Clustering};
pub use components::{connected_components, ComponentSummary};
pub use degree::{degree_distribution, DegreeDistribution};
pub use paths::{avg_shortest_path, PathLengthEstimate};
pub use powerlaw::{fit_power_law, fit_power_law_samples, PowerLawFit};
pub use report::{compute_report, MetricReport, ReportConfig};
pub use richclub::{normalized_rich_club, rich_club, RichClubPoint};
pub use smallworld::{small_world_omega, SmallWorld};

/// Largest graph on which all-pairs algorithms run in exact mode.
pub const EXACT_NODE_LIMIT: usize = 20_000;
/// Pivot sources used when a graph exceeds [`EXACT_NODE_LIMIT`].
pub const DEFAULT_PIVOTS: usize = 2_000;
/// Sampled node pairs for path length on graphs above the exact limit.
pub const DEFAULT_PATH_PAIRS: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathMode {
    Exact,
    Sampled { pairs: usize, seed: u64 },
}

impl PathMode {
    pub fn auto(node_count: usize, seed: u64) -> Self {
        if node_count <= EXACT_NODE_LIMIT {
            PathMode::Exact
        } else {
            PathMode::Sampled {
                pairs: DEFAULT_PATH_PAIRS,
                seed,
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CentralityMode {
    Exact,
    /// Brandes-style source sampling; partial sums are scaled by `N / sources`.
    Pivot {
        sources: usize,
        seed: u64,
    },
}

impl CentralityMode {
    pub fn auto(node_count: usize, seed: u64) -> Self {
        if node_count <= EXACT_NODE_LIMIT {
            CentralityMode::Exact
        } else {
            CentralityMode::Pivot {
                sources: DEFAULT_PIVOTS,
                seed,
            }
        }
    }
}

pub(crate) const UNREACHED: u32 = u32::MAX;

/// Reusable breadth-first search state.
pub(crate) struct Bfs {
    pub dist: Vec<u32>,
    /// Nodes in visit order; `order[0]` is the source.
    pub order: Vec<NodeId>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs {
            dist: vec![UNREACHED; n],
            order: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self) {
        for v in self.order.drain(..) {
            self.dist[v.index()] = UNREACHED;
        }
    }

    /// Distances from `source` along `neighbors`.
    pub fn run<'g>(&mut self, source: NodeId, neighbors: impl Fn(NodeId) -> &'g [NodeId]) {
        self.reset();
        self.dist[source.index()] = 0;
        self.order.push(source);
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let next = self.dist[v.index()] + 1;
            for &u in neighbors(v) {
                if self.dist[u.index()] == UNREACHED {
                    self.dist[u.index()] = next;
                    self.order.push(u);
                }
            }
        }
    }

    /// Like [`Bfs::run`] but stops once `target` is reached.
    pub fn distance<'g>(
        &mut self,
        source: NodeId,
        target: NodeId,
        neighbors: impl Fn(NodeId) -> &'g [NodeId],
    ) -> Option<u32> {
        self.reset();
        self.dist[source.index()] = 0;
        self.order.push(source);
        if source == target {
            return Some(0);
        }
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let next = self.dist[v.index()] + 1;
            for &u in neighbors(v) {
                if self.dist[u.index()] == UNREACHED {
                    if u == target {
                        return Some(next);
                    }
                    self.dist[u.index()] = next;
                    self.order.push(u);
                }
            }
        }
        None
    }
}

const SOURCE_CHUNK: usize = 32;

/// Fold over `sources` in parallel with a fixed chunking, then combine the
/// chunk results left to right, so float reductions do not depend on thread
/// count or scheduling.
pub(crate) fn fold_sources<A, I, F, C>(sources: &[NodeId], init: I, fold: F, mut combine: C) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    F: Fn(&mut A, NodeId) + Sync,
    C: FnMut(&mut A, A),
{
    let parts: Vec<A> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = init();
            for &s in chunk {
                fold(&mut acc, s);
            }
            acc
        })
        .collect();
    let mut total = init();
    for part in parts {
        combine(&mut total, part);
    }
    total
}

/// Undirected view of `g` (itself if already undirected).
pub(crate) fn projection(g: &WeightedDigraph) -> std::borrow::Cow<'_, WeightedDigraph> {
    if g.is_undirected() {
        std::borrow::Cow::Borrowed(g)
    } else {
        std::borrow::Cow::Owned(g.undirected_projection())
    }
}
