//! Null models and synthetic graphs: uniform random graphs, ring lattices,
//! degree-preserving rewirings and preferential-attachment growth.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::rng;

/// Swap attempts per edge used when no explicit count is given.
pub const DEFAULT_REWIRE_ATTEMPTS_PER_EDGE: usize = 100;

/// Pair `(i, j)`, `i < j`, at position `t` of the column-major upper triangle.
fn decode_pair(t: u64) -> (usize, usize) {
    let mut j = ((1.0 + (1.0 + 8.0 * t as f64).sqrt()) / 2.0) as u64;
    while j * (j - 1) / 2 > t {
        j -= 1;
    }
    while (j + 1) * j / 2 <= t {
        j += 1;
    }
    let i = t - j * (j - 1) / 2;
    (i as usize, j as usize)
}

/// Uniform simple undirected graph with exactly `n` nodes and `m` edges.
pub fn er_random(n: usize, m: usize, seed: u64) -> Result<WeightedDigraph> {
    let max = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > max {
        return Err(Error::TooManyEdges { n, m, max });
    }
    let mut rng = rng::seeded(seed, rng::stream::ER);
    let picked = index::sample(&mut rng, max, m);
    Ok(WeightedDigraph::from_undirected_index_edges(
        n,
        picked.into_iter().map(|t| {
            let (i, j) = decode_pair(t as u64);
            (i, j, 1.0)
        }),
    ))
}

/// Ring of `n` nodes, each joined to the `degree / 2` nearest nodes on
/// either side.
pub fn ring_lattice(n: usize, degree: usize) -> Result<WeightedDigraph> {
    if !degree.is_multiple_of(2) || degree >= n {
        return Err(Error::InvalidDegree { n, degree });
    }
    let half = degree / 2;
    Ok(WeightedDigraph::from_undirected_index_edges(
        n,
        (0..n).flat_map(|i| (1..=half).map(move |j| (i, (i + j) % n, 1.0))),
    ))
}

/// Lattice degree matching a graph with `n` nodes and `m` undirected edges:
/// the even integer nearest `2m / n`, clamped to `[2, n)`.
pub fn equivalent_lattice_degree(n: usize, m: usize) -> Result<usize> {
    let max_even = if n == 0 { 0 } else { (n - 1) & !1 };
    if max_even < 2 {
        return Err(Error::InvalidDegree { n, degree: 2 });
    }
    let mean = 2.0 * m as f64 / n as f64;
    let nearest = 2 * (mean / 2.0).round() as usize;
    Ok(nearest.clamp(2, max_even))
}

/// Directed double-edge swaps `a->b, c->d` to `a->d, c->b`, rejecting swaps
/// that would create a self-loop or a duplicate edge. Every node keeps its
/// in- and out-degree. Weights travel with the source endpoint.
pub fn degree_preserving_rewire(
    g: &WeightedDigraph,
    attempts: usize,
    seed: u64,
) -> WeightedDigraph {
    let mut edges: Vec<(u32, u32, f64, u32)> = g
        .edges()
        .map(|e| (e.src.0, e.dst.0, e.weight, e.multiplicity))
        .collect();
    if edges.len() >= 2 {
        let mut present: HashSet<(u32, u32)> = edges.iter().map(|e| (e.0, e.1)).collect();
        let mut rng = rng::seeded(seed, rng::stream::REWIRE);
        for _ in 0..attempts {
            let x = rng.random_range(0..edges.len());
            let y = rng.random_range(0..edges.len());
            let (a, b) = (edges[x].0, edges[x].1);
            let (c, d) = (edges[y].0, edges[y].1);
            if x == y || a == d || c == b || present.contains(&(a, d)) || present.contains(&(c, b))
            {
                continue;
            }
            present.remove(&(a, b));
            present.remove(&(c, d));
            present.insert((a, d));
            present.insert((c, b));
            edges[x].1 = d;
            edges[y].1 = b;
        }
    }
    WeightedDigraph::from_raw(g.labels().to_vec(), edges, false)
}

/// Undirected double-edge swaps `{a,b}, {c,d}` to `{a,d}, {c,b}` on the
/// undirected projection of `g`, preserving every node's degree.
pub fn rewire_undirected(g: &WeightedDigraph, attempts: usize, seed: u64) -> WeightedDigraph {
    let u = if g.is_undirected() {
        g.clone()
    } else {
        g.undirected_projection()
    };
    let mut edges: Vec<(u32, u32, f64)> = u
        .edges()
        .filter(|e| e.src < e.dst)
        .map(|e| (e.src.0, e.dst.0, e.weight))
        .collect();
    let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    if edges.len() >= 2 {
        let mut present: HashSet<(u32, u32)> = edges.iter().map(|e| (e.0, e.1)).collect();
        let mut rng = rng::seeded(seed, rng::stream::REWIRE);
        for _ in 0..attempts {
            let x = rng.random_range(0..edges.len());
            let y = rng.random_range(0..edges.len());
            let (a, b) = (edges[x].0, edges[x].1);
            let (mut c, mut d) = (edges[y].0, edges[y].1);
            if rng.random_bool(0.5) {
                std::mem::swap(&mut c, &mut d);
            }
            if x == y
                || a == d
                || c == b
                || present.contains(&key(a, d))
                || present.contains(&key(c, b))
            {
                continue;
            }
            present.remove(&key(a, b));
            present.remove(&key(c, d));
            present.insert(key(a, d));
            present.insert(key(c, b));
            let (p, q) = key(a, d);
            edges[x].0 = p;
            edges[x].1 = q;
            let (p, q) = key(c, b);
            edges[y].0 = p;
            edges[y].1 = q;
        }
    }
    let raw = edges
        .iter()
        .flat_map(|&(a, b, w)| [(a, b, w, 1), (b, a, w, 1)])
        .collect();
    WeightedDigraph::from_raw(u.labels().to_vec(), raw, true)
}

/// Preferential-attachment growth from a complete graph on `attach_m + 1`
/// nodes; each new node links to `attach_m` distinct existing nodes chosen
/// proportionally to degree. Each edge gets a random direction and unit
/// weight.
pub fn synthetic_scale_free(n: usize, attach_m: usize, seed: u64) -> Result<WeightedDigraph> {
    if attach_m == 0 {
        return Err(Error::InvalidConfig("attach_m must be at least 1".into()));
    }
    let mut rng = rng::seeded(seed, rng::stream::SCALE_FREE);
    let core = n.min(attach_m + 1);
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n * attach_m);
    // Every edge endpoint once, so a uniform pick is degree-proportional.
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * n * attach_m);
    for i in 0..core {
        for j in i + 1..core {
            pairs.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(attach_m);
    for v in core..n {
        chosen.clear();
        while chosen.len() < attach_m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            pairs.push((t, v));
            endpoints.extend([t, v]);
        }
    }
    let oriented: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(a, b)| {
            if rng.random_bool(0.5) {
                (a, b, 1.0)
            } else {
                (b, a, 1.0)
            }
        })
        .collect();
    Ok(WeightedDigraph::from_index_edges(n, oriented))
}
