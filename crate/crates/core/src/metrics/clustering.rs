use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::projection;
use crate::graph::{NodeId, WeightedDigraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    /// Local coefficient per node; 0 for nodes with fewer than two neighbors.
    pub per_node: Vec<f64>,
    /// Mean of `per_node` over all nodes.
    pub average: f64,
}

/// Triangles through each node of an undirected graph.
pub(crate) fn triangles(u: &WeightedDigraph) -> Vec<u64> {
    let n = u.node_count();
    (0..n)
        .into_par_iter()
        .map_init(
            || vec![false; n],
            |mark, v| {
                let v = NodeId::from(v);
                let neighbors = u.out_neighbors(v);
                if neighbors.len() < 2 {
                    return 0;
                }
                for &w in neighbors {
                    mark[w.index()] = true;
                }
                let mut links = 0u64;
                for &w in neighbors {
                    links += u
                        .out_neighbors(w)
                        .iter()
                        .filter(|x| mark[x.index()])
                        .count() as u64;
                }
                for &w in neighbors {
                    mark[w.index()] = false;
                }
                links / 2
            },
        )
        .collect()
}

/// Local and average clustering on the undirected projection without
/// self-loops.
pub fn clustering(g: &WeightedDigraph) -> Clustering {
    let u = projection(g);
    let tri = triangles(&u);
    let per_node: Vec<f64> = u
        .nodes()
        .map(|v| {
            let k = u.out_degree(v) as u64;
            if k < 2 {
                0.0
            } else {
                tri[v.index()] as f64 / (k * (k - 1) / 2) as f64
            }
        })
        .collect();
    let average = if per_node.is_empty() {
        0.0
    } else {
        per_node.iter().sum::<f64>() / per_node.len() as f64
    };
    Clustering { per_node, average }
}
