//! Shortest-path graph kernel over `(degree(u), degree(v), d(u, v))` triples
//! of ordered reachable node pairs, with degree and length compared by delta
//! or Gaussian base kernels.

use std::collections::HashMap;

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeMode, NodeId, WeightedDigraph};
use crate::metrics::{fold_sources, Bfs};
use crate::rng;

/// Largest graph the kernel accepts. Only the triple histogram is stored, so
/// memory stays linear in the number of distinct triples; time is one BFS
/// per node.
pub const DEFAULT_KERNEL_NODE_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseKernel {
    Delta,
    Gaussian { sigma: f64 },
}

impl BaseKernel {
    fn eval(self, a: u32, b: u32) -> f64 {
        match self {
            BaseKernel::Delta => (a == b) as u8 as f64,
            BaseKernel::Gaussian { sigma } => {
                let d = a as f64 - b as f64;
                (-d * d / (2.0 * sigma * sigma)).exp()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub vertex: BaseKernel,
    pub length: BaseKernel,
    pub node_cap: usize,
    /// Seed for the reference subsample taken when a reference graph
    /// exceeds `node_cap`.
    pub reference_seed: u64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            vertex: BaseKernel::Delta,
            length: BaseKernel::Delta,
            node_cap: DEFAULT_KERNEL_NODE_CAP,
            reference_seed: 0,
        }
    }
}

impl KernelParams {
    fn validate(&self) -> Result<()> {
        for k in [self.vertex, self.length] {
            if let BaseKernel::Gaussian { sigma } = k {
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "gaussian sigma {sigma} must be positive"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Counts of `(deg_u, deg_v, dist)` over ordered pairs `u != v` with `v`
/// reachable from `u`, sorted by triple. Degrees are total degrees and
/// distances directed hop counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathTripleHistogram {
    pub entries: Vec<([u32; 3], u64)>,
}

impl PathTripleHistogram {
    pub fn new(g: &WeightedDigraph, node_cap: usize) -> Result<Self> {
        let n = g.node_count();
        if n > node_cap {
            return Err(Error::GraphTooLarge {
                node_count: n,
                cap: node_cap,
            });
        }
        let degree: Vec<u32> = g
            .degrees(DegreeMode::Total)
            .into_iter()
            .map(|d| d as u32)
            .collect();
        let nodes: Vec<NodeId> = g.nodes().collect();
        let (counts, _) = fold_sources(
            &nodes,
            || (HashMap::<[u32; 3], u64>::new(), Bfs::new(n)),
            |acc, s| {
                acc.1.run(s, |v| g.out_neighbors(v));
                let ds = degree[s.index()];
                for &v in &acc.1.order[1..] {
                    *acc.0
                        .entry([ds, degree[v.index()], acc.1.dist[v.index()]])
                        .or_insert(0) += 1;
                }
            },
            |total, part| {
                for (k, c) in part.0 {
                    *total.0.entry(k).or_insert(0) += c;
                }
            },
        );
        let mut entries: Vec<([u32; 3], u64)> = counts.into_iter().collect();
        entries.sort_unstable();
        Ok(PathTripleHistogram { entries })
    }

    pub fn pair_count(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    fn kernel(&self, other: &Self, params: &KernelParams) -> f64 {
        if let (BaseKernel::Delta, BaseKernel::Delta) = (params.vertex, params.length) {
            return delta_dot(self, other) as f64;
        }
        let rows: Vec<f64> = self
            .entries
            .par_iter()
            .map(|&([a, b, d], c1)| {
                let mut row = 0.0;
                for &([w, z, e], c2) in &other.entries {
                    row += c2 as f64
                        * params.vertex.eval(a, w)
                        * params.vertex.eval(b, z)
                        * params.length.eval(d, e);
                }
                c1 as f64 * row
            })
            .collect();
        rows.iter().sum()
    }
}

/// Exact merge-join dot product of two sorted histograms.
fn delta_dot(a: &PathTripleHistogram, b: &PathTripleHistogram) -> u128 {
    let (mut i, mut j) = (0, 0);
    let mut sum = 0u128;
    while i < a.entries.len() && j < b.entries.len() {
        match a.entries[i].0.cmp(&b.entries[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                sum += a.entries[i].1 as u128 * b.entries[j].1 as u128;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

fn normalize(cross: f64, self_a: f64, self_b: f64) -> f64 {
    if self_a == 0.0 || self_b == 0.0 {
        return 0.0;
    }
    (cross / (self_a * self_b).sqrt()).clamp(0.0, 1.0)
}

pub fn sp_graph_kernel(
    g1: &WeightedDigraph,
    g2: &WeightedDigraph,
    params: &KernelParams,
) -> Result<f64> {
    params.validate()?;
    let h1 = PathTripleHistogram::new(g1, params.node_cap)?;
    let h2 = PathTripleHistogram::new(g2, params.node_cap)?;
    Ok(h1.kernel(&h2, params))
}

/// `K(g1, g2) / sqrt(K(g1, g1) K(g2, g2))`, or 0 if either self-kernel is 0.
pub fn kernel_normalized(
    g1: &WeightedDigraph,
    g2: &WeightedDigraph,
    params: &KernelParams,
) -> Result<f64> {
    params.validate()?;
    let h1 = PathTripleHistogram::new(g1, params.node_cap)?;
    let h2 = PathTripleHistogram::new(g2, params.node_cap)?;
    Ok(normalize(
        h1.kernel(&h2, params),
        h1.kernel(&h1, params),
        h2.kernel(&h2, params),
    ))
}

/// A reference graph prepared once for repeated kernel comparisons. A
/// reference above the size cap is replaced by the subgraph induced on a
/// uniform node subset of cap size.
#[derive(Clone, Debug)]
pub struct KernelReference {
    params: KernelParams,
    histogram: PathTripleHistogram,
    self_kernel: f64,
    pub subsampled: bool,
    pub node_count: usize,
}

impl KernelReference {
    pub fn prepare(g: &WeightedDigraph, params: &KernelParams) -> Result<Self> {
        params.validate()?;
        let n = g.node_count();
        let (histogram, subsampled, node_count) = if n > params.node_cap {
            let mut rng = rng::seeded(params.reference_seed, rng::stream::REFERENCE_SUBSAMPLE);
            let nodes: Vec<NodeId> = index::sample(&mut rng, n, params.node_cap)
                .into_iter()
                .map(NodeId::from)
                .collect();
            let sub = g.induced_subgraph(&nodes);
            (
                PathTripleHistogram::new(&sub, params.node_cap)?,
                true,
                params.node_cap,
            )
        } else {
            (PathTripleHistogram::new(g, params.node_cap)?, false, n)
        };
        let self_kernel = histogram.kernel(&histogram, params);
        Ok(KernelReference {
            params: *params,
            histogram,
            self_kernel,
            subsampled,
            node_count,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    pub fn compare(&self, g: &WeightedDigraph) -> Result<f64> {
        let h = PathTripleHistogram::new(g, self.params.node_cap)?;
        Ok(normalize(
            self.histogram.kernel(&h, &self.params),
            self.self_kernel,
            h.kernel(&h, &self.params),
        ))
    }
}
