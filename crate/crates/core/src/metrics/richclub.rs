use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::projection;
use crate::graph::WeightedDigraph;
use crate::reference;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichClubPoint {
    pub k: usize,
    /// Nodes with degree above `k`.
    pub club_size: u64,
    pub phi: f64,
    pub phi_rand: f64,
    pub phi_norm: f64,
    pub rich_club_ordering: bool,
}

/// Club sizes and internal edge counts for every threshold `0..=max_degree`.
struct ClubCensus {
    /// Nodes with degree > k.
    nodes_above: Vec<u64>,
    /// Edges with both endpoints of degree > k.
    edges_above: Vec<u64>,
}

fn census(u: &WeightedDigraph) -> ClubCensus {
    let degree: Vec<usize> = u.nodes().map(|v| u.out_degree(v)).collect();
    let max = degree.iter().copied().max().unwrap_or(0);
    let mut node_hist = vec![0u64; max + 1];
    for &d in &degree {
        node_hist[d] += 1;
    }
    // An edge stays in the club while k is below its smaller endpoint degree.
    let mut edge_hist = vec![0u64; max + 1];
    for e in u.edges() {
        if e.src < e.dst {
            edge_hist[degree[e.src.index()].min(degree[e.dst.index()])] += 1;
        }
    }
    let mut nodes_above = vec![0u64; max + 1];
    let mut edges_above = vec![0u64; max + 1];
    let (mut na, mut ea) = (0, 0);
    for k in (0..=max).rev() {
        nodes_above[k] = na;
        edges_above[k] = ea;
        na += node_hist[k];
        ea += edge_hist[k];
    }
    ClubCensus {
        nodes_above,
        edges_above,
    }
}

impl ClubCensus {
    fn phi(&self, k: usize) -> Option<f64> {
        let n = *self.nodes_above.get(k)?;
        if n < 2 {
            return None;
        }
        Some(2.0 * self.edges_above[k] as f64 / (n * (n - 1)) as f64)
    }

    fn default_ks(&self) -> Vec<usize> {
        (0..self.nodes_above.len())
            .filter(|&k| self.nodes_above[k] >= 2)
            .collect()
    }
}

/// Rich-club coefficient on the undirected projection. With `k_values` of
/// `None`, every threshold with at least two qualifying nodes is reported;
/// undefined points are omitted either way.
pub fn rich_club(g: &WeightedDigraph, k_values: Option<&[usize]>) -> Vec<(usize, f64)> {
    let u = projection(g);
    let c = census(&u);
    let ks = k_values
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| c.default_ks());
    ks.into_iter()
        .filter_map(|k| c.phi(k).map(|phi| (k, phi)))
        .collect()
}

/// Rich-club coefficient relative to the mean over `replicates`
/// degree-preserving rewirings of the projection.
pub fn normalized_rich_club(
    g: &WeightedDigraph,
    k_values: Option<&[usize]>,
    replicates: usize,
    seed: u64,
) -> Vec<RichClubPoint> {
    let u = projection(g);
    let observed = census(&u);
    let ks = k_values
        .map(<[usize]>::to_vec)
        .unwrap_or_else(|| observed.default_ks());
    let attempts = 100 * u.undirected_edge_count();
    let baselines: Vec<ClubCensus> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let rewired = reference::rewire_undirected(&u, attempts, rng::child_seed(seed, r));
            census(&rewired)
        })
        .collect();
    ks.into_iter()
        .filter_map(|k| {
            let phi = observed.phi(k)?;
            // Rewiring preserves degrees, so every baseline has the same club size.
            let phi_rand = baselines
                .iter()
                .map(|b| b.phi(k).unwrap_or(0.0))
                .sum::<f64>()
                / replicates.max(1) as f64;
            if phi_rand == 0.0 {
                return None;
            }
            let phi_norm = phi / phi_rand;
            Some(RichClubPoint {
                k,
                club_size: observed.nodes_above[k],
                phi,
                phi_rand,
                phi_norm,
                rich_club_ordering: phi_norm > 1.0,
            })
        })
        .collect()
}
