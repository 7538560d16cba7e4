//! Weighted directed transaction graphs.
//!
//! A transaction with `x` inputs and `y` outputs expands into `x * y` directed
//! edges; the edge from input `i` to output `j` carries
//! `input_i / sum(inputs) * output_j`. Repeated `(src, dst)` pairs collapse
//! into one edge whose weight is the sum and whose multiplicity counts the
//! contributing edges.
//!
//! Graphs are immutable compressed adjacency arrays holding both directions.
//! Node ids are dense `0..N`; when built from address strings they follow the
//! lexicographic order of the addresses, so construction does not depend on
//! the order of the edge stream.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest currency units per coin (satoshi per BTC).
pub const UNITS_PER_COIN: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    #[inline]
    fn from(i: usize) -> Self {
        NodeId(u32::try_from(i).expect("node index exceeds u32"))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An edge between two addresses, prior to id assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedEdge {
    pub src: String,
    pub dst: String,
    pub weight: f64,
}

/// One transaction. Amounts are in smallest currency units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionRecord {
    pub tx_id: String,
    pub inputs: Vec<(String, u64)>,
    pub outputs: Vec<(String, u64)>,
}

impl TransactionRecord {
    pub fn input_total(&self) -> u128 {
        self.inputs.iter().map(|(_, a)| *a as u128).sum()
    }

    pub fn output_total(&self) -> u128 {
        self.outputs.iter().map(|(_, a)| *a as u128).sum()
    }

    /// Outputs exceed inputs, i.e. the implied fee is negative.
    pub fn overspends(&self) -> bool {
        let input = self.input_total();
        input > 0 && self.output_total() > input
    }
}

/// Expand a transaction into its `|inputs| * |outputs|` weighted edges, in
/// input-major order. Weights are in coins.
pub fn expand_transaction(tx: &TransactionRecord) -> Result<Vec<WeightedEdge>> {
    if tx.inputs.is_empty() {
        return Err(Error::EmptySide {
            tx_id: tx.tx_id.clone(),
            side: "inputs",
        });
    }
    if tx.outputs.is_empty() {
        return Err(Error::EmptySide {
            tx_id: tx.tx_id.clone(),
            side: "outputs",
        });
    }
    let input_total = tx.input_total();
    if input_total == 0 {
        return Err(Error::ZeroInputSum {
            tx_id: tx.tx_id.clone(),
        });
    }
    // input_i * output_j / (sum_inputs * UNITS_PER_COIN): one rounding on
    // each side of the division, so e.g. 2/(2+8)*3 comes out as exactly 0.6.
    let denominator = (input_total * UNITS_PER_COIN as u128) as f64;
    let mut edges = Vec::with_capacity(tx.inputs.len() * tx.outputs.len());
    for (src, input) in &tx.inputs {
        for (dst, output) in &tx.outputs {
            let numerator = (*input as u128 * *output as u128) as f64;
            edges.push(WeightedEdge {
                src: src.clone(),
                dst: dst.clone(),
                weight: numerator / denominator,
            });
        }
    }
    Ok(edges)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeMode {
    In,
    Out,
    Total,
}

/// Immutable weighted digraph in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    out_weights: Vec<f64>,
    out_multiplicity: Vec<u32>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
    in_weights: Vec<f64>,
    self_loops: usize,
    undirected: bool,
}

/// An edge stored in a graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
    pub multiplicity: u32,
}

impl WeightedDigraph {
    pub fn empty() -> Self {
        Self::from_raw(Vec::new(), Vec::new(), false)
    }

    /// Build from explicit labels and `(src, dst, weight, multiplicity)` tuples
    /// over indices into `labels`. Duplicate pairs are collapsed.
    pub(crate) fn from_raw(
        labels: Vec<String>,
        mut edges: Vec<(u32, u32, f64, u32)>,
        undirected: bool,
    ) -> Self {
        let n = labels.len();
        // Weight ordering inside a pair fixes the float summation order.
        edges.sort_unstable_by(|a, b| {
            (a.0, a.1)
                .cmp(&(b.0, b.1))
                .then_with(|| a.2.total_cmp(&b.2))
                .then_with(|| a.3.cmp(&b.3))
        });

        let mut out_offsets = vec![0usize; n + 1];
        let mut out_targets = Vec::with_capacity(edges.len());
        let mut out_weights = Vec::with_capacity(edges.len());
        let mut out_multiplicity = Vec::with_capacity(edges.len());
        let mut sources = Vec::with_capacity(edges.len());
        let mut self_loops = 0;

        let mut i = 0;
        while i < edges.len() {
            let (s, d) = (edges[i].0, edges[i].1);
            assert!(
                (s as usize) < n && (d as usize) < n,
                "edge endpoint out of range"
            );
            let mut weight = 0.0;
            let mut mult = 0u32;
            while i < edges.len() && edges[i].0 == s && edges[i].1 == d {
                weight += edges[i].2;
                mult = mult.saturating_add(edges[i].3);
                i += 1;
            }
            if s == d {
                self_loops += 1;
            }
            out_offsets[s as usize + 1] += 1;
            sources.push(NodeId(s));
            out_targets.push(NodeId(d));
            out_weights.push(weight);
            out_multiplicity.push(mult);
        }
        for v in 0..n {
            out_offsets[v + 1] += out_offsets[v];
        }

        // Counting sort by destination; stable, so sources stay sorted.
        let m = out_targets.len();
        let mut in_offsets = vec![0usize; n + 1];
        for t in &out_targets {
            in_offsets[t.index() + 1] += 1;
        }
        for v in 0..n {
            in_offsets[v + 1] += in_offsets[v];
        }
        let mut cursor = in_offsets.clone();
        let mut in_sources = vec![NodeId(0); m];
        let mut in_weights = vec![0.0; m];
        for e in 0..m {
            let t = out_targets[e].index();
            in_sources[cursor[t]] = sources[e];
            in_weights[cursor[t]] = out_weights[e];
            cursor[t] += 1;
        }

        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), NodeId::from(i)))
            .collect();

        WeightedDigraph {
            labels,
            index,
            out_offsets,
            out_targets,
            out_weights,
            out_multiplicity,
            in_offsets,
            in_sources,
            in_weights,
            self_loops,
            undirected,
        }
    }

    /// Graph over nodes `0..n` labelled by their decimal index.
    pub fn from_index_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let edges = edges
            .into_iter()
            .map(|(s, d, w)| (NodeId::from(s).0, NodeId::from(d).0, w, 1))
            .collect();
        Self::from_raw(labels, edges, false)
    }

    /// Symmetric graph over `0..n`: each `{u, v}` becomes `u->v` and `v->u`.
    pub fn from_undirected_index_edges(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let mut raw = Vec::new();
        for (u, v, w) in edges {
            if u == v {
                continue;
            }
            let (u, v) = (NodeId::from(u).0, NodeId::from(v).0);
            raw.push((u, v, w, 1));
            raw.push((v, u, w, 1));
        }
        Self::from_raw(labels, raw, true)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of distinct directed `(src, dst)` pairs.
    pub fn edge_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Whether this graph is a symmetric undirected graph (a projection or a
    /// generated null model).
    pub fn is_undirected(&self) -> bool {
        self.undirected
    }

    /// Undirected edges of a symmetric graph: `edge_count / 2`.
    pub fn undirected_edge_count(&self) -> usize {
        debug_assert!(self.undirected);
        (self.edge_count() - self.self_loops) / 2
    }

    pub fn self_loop_count(&self) -> usize {
        self.self_loops
    }

    pub fn has_self_loop(&self, v: NodeId) -> bool {
        self.out_neighbors(v).binary_search(&v).is_ok()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::from)
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v.index();
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        let v = v.index();
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_weights(&self, v: NodeId) -> &[f64] {
        let v = v.index();
        &self.out_weights[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    pub fn in_weights(&self, v: NodeId) -> &[f64] {
        let v = v.index();
        &self.in_weights[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        let v = v.index();
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        let v = v.index();
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Unweighted degree over collapsed edges. A self-loop counts once in each
    /// direction.
    pub fn degree(&self, v: NodeId, mode: DegreeMode) -> Result<usize> {
        if v.index() >= self.node_count() {
            return Err(Error::NodeOutOfRange {
                node: v.index(),
                node_count: self.node_count(),
            });
        }
        Ok(match mode {
            DegreeMode::In => self.in_degree(v),
            DegreeMode::Out => self.out_degree(v),
            DegreeMode::Total => self.in_degree(v) + self.out_degree(v),
        })
    }

    pub fn degrees(&self, mode: DegreeMode) -> Vec<usize> {
        self.nodes()
            .map(|v| match mode {
                DegreeMode::In => self.in_degree(v),
                DegreeMode::Out => self.out_degree(v),
                DegreeMode::Total => self.in_degree(v) + self.out_degree(v),
            })
            .collect()
    }

    /// Weight of `src -> dst`, if present.
    pub fn weight(&self, src: NodeId, dst: NodeId) -> Option<f64> {
        let pos = self.out_neighbors(src).binary_search(&dst).ok()?;
        Some(self.out_weights(src)[pos])
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.out_neighbors(src).binary_search(&dst).is_ok()
    }

    /// All edges sorted by `(src, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.nodes().flat_map(move |s| {
            let lo = self.out_offsets[s.index()];
            let hi = self.out_offsets[s.index() + 1];
            (lo..hi).map(move |e| Edge {
                src: s,
                dst: self.out_targets[e],
                weight: self.out_weights[e],
                multiplicity: self.out_multiplicity[e],
            })
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.out_weights.iter().sum()
    }

    pub fn transpose(&self) -> Self {
        let raw = self
            .edges()
            .map(|e| (e.dst.0, e.src.0, e.weight, e.multiplicity))
            .collect();
        Self::from_raw(self.labels.clone(), raw, self.undirected)
    }

    /// Symmetric simple graph: `{i, j}` present iff `i->j` or `j->i` is, with
    /// the weights of both directions summed. Self-loops are dropped.
    /// Projecting an undirected graph returns it unchanged.
    pub fn undirected_projection(&self) -> Self {
        if self.undirected {
            return self.clone();
        }
        let mut raw = Vec::with_capacity(2 * self.edge_count());
        for e in self.edges() {
            if e.src == e.dst {
                continue;
            }
            raw.push((e.src.0, e.dst.0, e.weight, e.multiplicity));
            raw.push((e.dst.0, e.src.0, e.weight, e.multiplicity));
        }
        Self::from_raw(self.labels.clone(), raw, true)
    }

    /// Subgraph induced on `nodes` (any order, duplicates ignored), keeping
    /// original labels, weights and multiplicities. Node ids are reassigned in
    /// increasing original-id order.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Self {
        let (labels, remap) = self.restrict_labels(nodes);
        let mut raw = Vec::new();
        for (new_s, &old_s) in remap.order.iter().enumerate() {
            let lo = self.out_offsets[old_s.index()];
            let hi = self.out_offsets[old_s.index() + 1];
            for e in lo..hi {
                if let Some(new_d) = remap.get(self.out_targets[e]) {
                    raw.push((
                        new_s as u32,
                        new_d,
                        self.out_weights[e],
                        self.out_multiplicity[e],
                    ));
                }
            }
        }
        Self::from_raw(labels, raw, self.undirected)
    }

    /// Subgraph on `nodes` containing only the listed original edges. Edges
    /// that do not exist in this graph or leave the node set are ignored.
    pub fn edge_subgraph(&self, nodes: &[NodeId], edges: &[(NodeId, NodeId)]) -> Self {
        let (labels, remap) = self.restrict_labels(nodes);
        let mut pairs: Vec<(NodeId, NodeId)> = edges.to_vec();
        pairs.sort_unstable();
        pairs.dedup();
        let mut raw = Vec::new();
        for (s, d) in pairs {
            let (Some(ns), Some(nd)) = (remap.get(s), remap.get(d)) else {
                continue;
            };
            let Ok(pos) = self.out_neighbors(s).binary_search(&d) else {
                continue;
            };
            let e = self.out_offsets[s.index()] + pos;
            raw.push((ns, nd, self.out_weights[e], self.out_multiplicity[e]));
        }
        Self::from_raw(labels, raw, false)
    }

    fn restrict_labels(&self, nodes: &[NodeId]) -> (Vec<String>, Remap) {
        let mut order: Vec<NodeId> = nodes.to_vec();
        order.sort_unstable();
        order.dedup();
        let labels = order
            .iter()
            .map(|&v| self.labels[v.index()].clone())
            .collect();
        (labels, Remap { order })
    }

    /// Compare two graphs by label, allowing a relative weight tolerance.
    pub fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        self.compare(other, |a, b| {
            a == b || (a - b).abs() <= rel_tol * a.abs().max(b.abs())
        })
    }

    fn compare(&self, other: &Self, weight_eq: impl Fn(f64, f64) -> bool) -> bool {
        if self.node_count() != other.node_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let map: Option<Vec<NodeId>> = self.labels.iter().map(|l| other.node_id(l)).collect();
        let Some(map) = map else {
            return false;
        };
        for v in self.nodes() {
            let w = map[v.index()];
            if self.out_degree(v) != other.out_degree(w) {
                return false;
            }
            let lo = self.out_offsets[v.index()];
            for (k, &t) in self.out_neighbors(v).iter().enumerate() {
                let e = lo + k;
                let t2 = map[t.index()];
                let Ok(pos) = other.out_neighbors(w).binary_search(&t2) else {
                    return false;
                };
                let e2 = other.out_offsets[w.index()] + pos;
                if !weight_eq(self.out_weights[e], other.out_weights[e2])
                    || self.out_multiplicity[e] != other.out_multiplicity[e2]
                {
                    return false;
                }
            }
        }
        true
    }
}

/// Graphs are equal when they have the same labels and the same labelled
/// edges with identical weights and multiplicities; internal ids may differ.
impl PartialEq for WeightedDigraph {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other, |a, b| a == b)
    }
}

struct Remap {
    order: Vec<NodeId>,
}

impl Remap {
    fn get(&self, old: NodeId) -> Option<u32> {
        self.order.binary_search(&old).ok().map(|i| i as u32)
    }
}

/// Streaming graph construction from address-labelled edges.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    interned: HashMap<String, u32>,
    labels: Vec<String>,
    edges: Vec<(u32, u32, f64, u32)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.interned.get(label) {
            return id;
        }
        let id = u32::try_from(self.labels.len()).expect("more than u32::MAX addresses");
        self.interned.insert(label.to_owned(), id);
        self.labels.push(label.to_owned());
        id
    }

    /// Declare a node that may have no edges.
    pub fn add_node(&mut self, label: &str) {
        self.intern(label);
    }

    pub fn add_edge(&mut self, src: &str, dst: &str, weight: f64) {
        self.add_edge_with_multiplicity(src, dst, weight, 1);
    }

    pub fn add_edge_with_multiplicity(
        &mut self,
        src: &str,
        dst: &str,
        weight: f64,
        multiplicity: u32,
    ) {
        debug_assert!(weight.is_finite() && weight >= 0.0);
        let s = self.intern(src);
        let d = self.intern(dst);
        self.edges.push((s, d, weight, multiplicity));
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn finish(self) -> WeightedDigraph {
        let GraphBuilder {
            labels, mut edges, ..
        } = self;
        let mut order: Vec<u32> = (0..labels.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| labels[a as usize].cmp(&labels[b as usize]));
        let mut rank = vec![0u32; labels.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old as usize] = new as u32;
        }
        for e in &mut edges {
            e.0 = rank[e.0 as usize];
            e.1 = rank[e.1 as usize];
        }
        let mut labels = labels;
        let sorted: Vec<String> = order
            .iter()
            .map(|&old| std::mem::take(&mut labels[old as usize]))
            .collect();
        WeightedDigraph::from_raw(sorted, edges, false)
    }
}

pub fn build_graph(edges: impl IntoIterator<Item = WeightedEdge>) -> WeightedDigraph {
    let mut builder = GraphBuilder::new();
    for e in edges {
        builder.add_edge(&e.src, &e.dst, e.weight);
    }
    builder.finish()
}
