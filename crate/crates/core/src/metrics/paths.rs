use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::components::{largest_members, weakly_connected};
use super::{fold_sources, projection, Bfs, PathMode, EXACT_NODE_LIMIT};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLengthEstimate {
    /// Mean hop distance over ordered reachable pairs.
    pub mean: f64,
    /// Standard error of `mean`; zero in exact mode.
    pub std_error: f64,
    pub pairs: u64,
    /// Nodes the computation ran over.
    pub component_nodes: usize,
    pub restricted_to_largest_wcc: bool,
    pub exact: bool,
}

/// Average shortest-path length on the undirected projection.
///
/// With `restrict_to_largest_wcc` the mean runs over the largest connected
/// component; otherwise over the whole graph, failing with
/// [`Error::DisconnectedInput`] if any pair is unreachable.
pub fn avg_shortest_path(
    g: &WeightedDigraph,
    mode: PathMode,
    restrict_to_largest_wcc: bool,
) -> Result<PathLengthEstimate> {
    let u = projection(g);
    let nodes: Vec<NodeId> = if restrict_to_largest_wcc {
        largest_component(&u)
    } else {
        u.nodes().collect()
    };
    let n = nodes.len();
    if n < 2 {
        return Err(Error::InsufficientData(
            "path length needs at least two connected nodes".into(),
        ));
    }
    let neighbors = |v: NodeId| u.out_neighbors(v);

    match mode {
        PathMode::Exact => {
            if n > EXACT_NODE_LIMIT {
                return Err(Error::GraphTooLargeForExact {
                    what: "average shortest path",
                    node_count: n,
                    limit: EXACT_NODE_LIMIT,
                });
            }
            let nn = u.node_count();
            let (sum, reached, _) = fold_sources(
                &nodes,
                || (0u64, 0u64, Bfs::new(nn)),
                |acc, s| {
                    acc.2.run(s, neighbors);
                    for &v in &acc.2.order[1..] {
                        acc.0 += acc.2.dist[v.index()] as u64;
                    }
                    acc.1 += acc.2.order.len() as u64 - 1;
                },
                |total, part| {
                    total.0 += part.0;
                    total.1 += part.1;
                },
            );
            let expected = (n as u64) * (n as u64 - 1);
            if reached != expected {
                return Err(Error::DisconnectedInput);
            }
            Ok(PathLengthEstimate {
                mean: sum as f64 / reached as f64,
                std_error: 0.0,
                pairs: reached,
                component_nodes: n,
                restricted_to_largest_wcc: restrict_to_largest_wcc,
                exact: true,
            })
        }
        PathMode::Sampled { pairs, seed } => {
            if pairs == 0 {
                return Err(Error::InvalidConfig(
                    "sampled path length needs pairs > 0".into(),
                ));
            }
            let mut rng = rng::seeded(seed, rng::stream::PATH_PAIRS);
            let draws: Vec<(NodeId, NodeId)> = (0..pairs)
                .map(|_| {
                    let a = rng.random_range(0..n);
                    let mut b = rng.random_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    (nodes[a], nodes[b])
                })
                .collect();
            let mut bfs = Bfs::new(u.node_count());
            let mut sum = 0f64;
            let mut sum_sq = 0f64;
            for &(a, b) in &draws {
                let d = bfs
                    .distance(a, b, neighbors)
                    .ok_or(Error::DisconnectedInput)? as f64;
                sum += d;
                sum_sq += d * d;
            }
            let k = pairs as f64;
            let mean = sum / k;
            let var = if pairs > 1 {
                ((sum_sq - k * mean * mean) / (k - 1.0)).max(0.0)
            } else {
                0.0
            };
            Ok(PathLengthEstimate {
                mean,
                std_error: (var / k).sqrt(),
                pairs: pairs as u64,
                component_nodes: n,
                restricted_to_largest_wcc: restrict_to_largest_wcc,
                exact: false,
            })
        }
    }
}

pub(crate) fn largest_component(u: &WeightedDigraph) -> Vec<NodeId> {
    let (membership, count) = weakly_connected(u);
    largest_members(&membership, count)
}
