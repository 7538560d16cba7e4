use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::clustering::clustering;
use super::paths::{avg_shortest_path, largest_component};
use super::{projection, PathMode};
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::reference;
use crate::rng;

/// Replicates per null model unless configured otherwise.
pub const DEFAULT_REPLICATES: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallWorld {
    /// `l_rand_mean / l - c / c_latt_mean`, unclamped.
    pub omega: f64,
    pub l: f64,
    pub c: f64,
    pub l_rand_mean: f64,
    pub c_latt_mean: f64,
    pub lattice_degree: usize,
    /// Size of the largest component the comparison ran on.
    pub nodes: usize,
    pub edges: usize,
    pub replicates: usize,
}

/// Small-world coefficient of the largest connected component of the
/// undirected projection, against equal-size random graphs and ring
/// lattices.
pub fn small_world_omega(
    g: &WeightedDigraph,
    replicates: usize,
    seed: u64,
    path_mode: PathMode,
) -> Result<SmallWorld> {
    if replicates == 0 {
        return Err(Error::InvalidConfig(
            "omega needs at least one replicate".into(),
        ));
    }
    let u = projection(g);
    let component = u.induced_subgraph(&largest_component(&u));
    let n = component.node_count();
    let m = component.undirected_edge_count();
    let lattice_degree = reference::equivalent_lattice_degree(n, m)?;

    let l = avg_shortest_path(&component, path_mode, false)?.mean;
    let c = clustering(&component).average;

    let l_rand: Vec<f64> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let child = rng::child_seed(seed, r);
            let random = reference::er_random(n, m, child)?;
            let mode = match path_mode {
                PathMode::Exact => PathMode::Exact,
                PathMode::Sampled { pairs, .. } => PathMode::Sampled { pairs, seed: child },
            };
            Ok(avg_shortest_path(&random, mode, true)?.mean)
        })
        .collect::<Result<_>>()?;
    let l_rand_mean = l_rand.iter().sum::<f64>() / replicates as f64;

    // The ring lattice is deterministic, so every replicate is the same graph.
    let c_latt_mean = clustering(&reference::ring_lattice(n, lattice_degree)?).average;
    if c_latt_mean == 0.0 {
        return Err(Error::InsufficientData(format!(
            "equivalent lattice of degree {lattice_degree} has no triangles"
        )));
    }

    Ok(SmallWorld {
        omega: l_rand_mean / l - c / c_latt_mean,
        l,
        c,
        l_rand_mean,
        c_latt_mean,
        lattice_degree,
        nodes: n,
        edges: m,
        replicates,
    })
}
