//! Graph samplers: random walk with flying-back (RWFB) and the baselines
//! random walk (RWS), random node (RN), random edge (RE), forest fire (FF)
//! and snowball (SB).
//!
//! Every sampler returns exactly `target_nodes` nodes. Unless
//! [`SubgraphMode::Traversed`] is requested the sample is the subgraph induced
//! on the selected nodes, carrying the original edge weights.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::rng::{self, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplerMethod {
    Rwfb,
    Rws,
    Rn,
    Re,
    Ff,
    Sb,
}

impl SamplerMethod {
    pub const ALL: [SamplerMethod; 6] = [
        SamplerMethod::Rwfb,
        SamplerMethod::Rws,
        SamplerMethod::Rn,
        SamplerMethod::Re,
        SamplerMethod::Ff,
        SamplerMethod::Sb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SamplerMethod::Rwfb => "rwfb",
            SamplerMethod::Rws => "rws",
            SamplerMethod::Rn => "rn",
            SamplerMethod::Re => "re",
            SamplerMethod::Ff => "ff",
            SamplerMethod::Sb => "sb",
        }
    }
}

impl fmt::Display for SamplerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        SamplerMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown sampling method `{s}`"))
    }
}

/// What a flying-back step does.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RestartPolicy {
    /// Jump back to the node the current walk started from.
    #[default]
    RestartToStart,
    /// Stay at the current node for one step (lazy walk).
    StayAtCurrent,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgraphMode {
    /// Every original edge between selected nodes.
    #[default]
    Induced,
    /// Only the edges the sampler actually crossed. Random-node sampling
    /// crosses none.
    Traversed,
}

pub const DEFAULT_FLY_BACK: f64 = 0.3;
pub const DEFAULT_FF_FORWARD_PROB: f64 = 0.7;
pub const DEFAULT_SB_DEPTH: usize = 2;
pub const DEFAULT_STALL_STEPS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub method: SamplerMethod,
    pub target_nodes: usize,
    /// Flying-back probability (RWFB only).
    pub p: f64,
    /// Forward-burning probability (FF only).
    pub ff_forward_prob: f64,
    /// Snowball depth (SB only).
    pub sb_depth: usize,
    pub seed: u64,
    pub restart_policy: RestartPolicy,
    pub subgraph: SubgraphMode,
    /// Walks that go this many consecutive steps without reaching a new node
    /// restart from a fresh node.
    pub stall_steps: usize,
}

impl SamplerConfig {
    pub fn new(method: SamplerMethod, target_nodes: usize, seed: u64) -> Self {
        SamplerConfig {
            method,
            target_nodes,
            p: DEFAULT_FLY_BACK,
            ff_forward_prob: DEFAULT_FF_FORWARD_PROB,
            sb_depth: DEFAULT_SB_DEPTH,
            seed,
            restart_policy: RestartPolicy::default(),
            subgraph: SubgraphMode::default(),
            stall_steps: DEFAULT_STALL_STEPS,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn validate(&self, g: &WeightedDigraph) -> Result<()> {
        if g.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if self.target_nodes == 0 {
            return Err(Error::InvalidConfig("target_nodes must be positive".into()));
        }
        if self.target_nodes > g.node_count() {
            return Err(Error::TargetTooLarge {
                target: self.target_nodes,
                node_count: g.node_count(),
            });
        }
        if !(0.0..1.0).contains(&self.p) {
            return Err(Error::InvalidConfig(format!(
                "p = {} outside [0, 1)",
                self.p
            )));
        }
        if !(self.ff_forward_prob > 0.0 && self.ff_forward_prob < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "ff_forward_prob = {} outside (0, 1)",
                self.ff_forward_prob
            )));
        }
        if self.sb_depth == 0 {
            return Err(Error::InvalidConfig("sb_depth must be at least 1".into()));
        }
        if self.stall_steps == 0 {
            return Err(Error::InvalidConfig("stall_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SampleResult {
    pub subgraph: WeightedDigraph,
    /// Original node ids in the order they were first selected.
    pub visited_order: Vec<NodeId>,
    pub restarts: u64,
    pub steps_taken: u64,
}

/// Run the sampler selected by `cfg.method`.
pub fn sample(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    match cfg.method {
        SamplerMethod::Rwfb => sample_rwfb(g, cfg),
        SamplerMethod::Rws => sample_rws(g, cfg),
        SamplerMethod::Rn => sample_rn(g, cfg),
        SamplerMethod::Re => sample_re(g, cfg),
        SamplerMethod::Ff => sample_ff(g, cfg),
        SamplerMethod::Sb => sample_sb(g, cfg),
    }
}

/// Selected nodes plus crossed edges, capped at the target size.
struct Selection<'g> {
    g: &'g WeightedDigraph,
    target: usize,
    visited: Vec<bool>,
    order: Vec<NodeId>,
    crossed: Vec<(NodeId, NodeId)>,
}

impl<'g> Selection<'g> {
    fn new(g: &'g WeightedDigraph, target: usize) -> Self {
        Selection {
            g,
            target,
            visited: vec![false; g.node_count()],
            order: Vec::with_capacity(target),
            crossed: Vec::new(),
        }
    }

    fn full(&self) -> bool {
        self.order.len() >= self.target
    }

    fn room(&self) -> usize {
        self.target - self.order.len()
    }

    fn contains(&self, v: NodeId) -> bool {
        self.visited[v.index()]
    }

    /// Select `v`; returns whether it was new.
    fn add(&mut self, v: NodeId) -> bool {
        if self.visited[v.index()] {
            return false;
        }
        debug_assert!(!self.full());
        self.visited[v.index()] = true;
        self.order.push(v);
        true
    }

    fn cross(&mut self, src: NodeId, dst: NodeId) {
        self.crossed.push((src, dst));
    }

    /// Uniform random node not yet selected. Requires `!full()`.
    fn fresh(&self, rng: &mut Rng) -> NodeId {
        let n = self.g.node_count();
        let remaining = n - self.order.len();
        debug_assert!(remaining > 0);
        if remaining * 2 >= n {
            loop {
                let v = NodeId::from(rng.random_range(0..n));
                if !self.contains(v) {
                    return v;
                }
            }
        }
        let k = rng.random_range(0..remaining);
        self.g
            .nodes()
            .filter(|&v| !self.contains(v))
            .nth(k)
            .expect("unselected node exists")
    }

    fn finish(self, mode: SubgraphMode, restarts: u64, steps_taken: u64) -> SampleResult {
        let subgraph = match mode {
            SubgraphMode::Induced => self.g.induced_subgraph(&self.order),
            SubgraphMode::Traversed => self.g.edge_subgraph(&self.order, &self.crossed),
        };
        SampleResult {
            subgraph,
            visited_order: self.order,
            restarts,
            steps_taken,
        }
    }
}

/// Random walk with flying-back: at each step, with probability `p` fly back
/// (per `restart_policy`), otherwise move to a uniformly chosen out-neighbor.
/// Nodes without out-neighbors restart the walk at a fresh random node.
pub fn sample_rwfb(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    Ok(walk(g, cfg, cfg.p))
}

/// Classic random walk: RWFB with `p = 0`.
pub fn sample_rws(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    Ok(walk(g, cfg, 0.0))
}

fn walk(g: &WeightedDigraph, cfg: &SamplerConfig, p: f64) -> SampleResult {
    let mut rng = rng::seeded(cfg.seed, rng::stream::SAMPLER);
    let mut sel = Selection::new(g, cfg.target_nodes);
    let mut restarts = 0u64;
    let mut steps = 0u64;

    let mut origin = sel.fresh(&mut rng);
    sel.add(origin);
    let mut current = origin;
    let mut stalled = 0usize;

    while !sel.full() {
        steps += 1;
        if p > 0.0 && rng.random_bool(p) {
            if cfg.restart_policy == RestartPolicy::RestartToStart {
                current = origin;
            }
            stalled += 1;
        } else {
            let neighbors = g.out_neighbors(current);
            if neighbors.is_empty() {
                restarts += 1;
                origin = sel.fresh(&mut rng);
                sel.add(origin);
                current = origin;
                stalled = 0;
                continue;
            }
            let next = neighbors[rng.random_range(0..neighbors.len())];
            sel.cross(current, next);
            if sel.add(next) {
                stalled = 0;
            } else {
                stalled += 1;
            }
            current = next;
        }
        if stalled >= cfg.stall_steps && !sel.full() {
            restarts += 1;
            origin = sel.fresh(&mut rng);
            sel.add(origin);
            current = origin;
            stalled = 0;
        }
    }
    sel.finish(cfg.subgraph, restarts, steps)
}

/// Uniform node set without replacement; always induced.
pub fn sample_rn(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    let mut rng = rng::seeded(cfg.seed, rng::stream::SAMPLER);
    let mut sel = Selection::new(g, cfg.target_nodes);
    for i in index::sample(&mut rng, g.node_count(), cfg.target_nodes) {
        sel.add(NodeId::from(i));
    }
    let steps = sel.order.len() as u64;
    Ok(sel.finish(SubgraphMode::Induced, 0, steps))
}

/// Uniform edges without replacement until their endpoints fill the target.
/// When one slot is left and a drawn edge brings two new endpoints, one of
/// them is kept at random. Isolated nodes are reached by fresh random draws
/// once edges run out.
pub fn sample_re(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    let mut rng = rng::seeded(cfg.seed, rng::stream::SAMPLER);
    let mut sel = Selection::new(g, cfg.target_nodes);
    let mut edges: Vec<(NodeId, NodeId)> = g.edges().map(|e| (e.src, e.dst)).collect();
    let mut steps = 0u64;
    let mut restarts = 0u64;

    // Lazy Fisher-Yates: position i receives a uniform pick from i..m.
    let m = edges.len();
    let mut i = 0;
    while !sel.full() && i < m {
        let j = rng.random_range(i..m);
        edges.swap(i, j);
        let (s, d) = edges[i];
        i += 1;
        steps += 1;
        let new_s = !sel.contains(s);
        let new_d = !sel.contains(d) && s != d;
        if new_s && new_d && sel.room() == 1 {
            sel.add(if rng.random_bool(0.5) { s } else { d });
            continue;
        }
        sel.add(s);
        sel.add(d);
        sel.cross(s, d);
    }
    while !sel.full() {
        restarts += 1;
        let v = sel.fresh(&mut rng);
        sel.add(v);
    }
    Ok(sel.finish(cfg.subgraph, restarts, steps))
}

/// Forest fire: each burning node ignites a geometric number (mean
/// `pf / (1 - pf)`) of its unburned out-neighbors; a fire that dies out is
/// re-seeded at a fresh random node.
pub fn sample_ff(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    let mut rng = rng::seeded(cfg.seed, rng::stream::SAMPLER);
    let burn = Geometric::new(1.0 - cfg.ff_forward_prob)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut sel = Selection::new(g, cfg.target_nodes);
    let mut restarts = 0u64;
    let mut steps = 0u64;
    let mut queue = VecDeque::new();
    let mut candidates = Vec::new();

    let mut first = true;
    while !sel.full() {
        if !first {
            restarts += 1;
        }
        first = false;
        let seed = sel.fresh(&mut rng);
        sel.add(seed);
        queue.clear();
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            if sel.full() {
                break;
            }
            steps += 1;
            let x = burn.sample(&mut rng) as usize;
            candidates.clear();
            candidates.extend(
                g.out_neighbors(v)
                    .iter()
                    .copied()
                    .filter(|&u| !sel.contains(u)),
            );
            let k = x.min(candidates.len());
            if k == 0 {
                continue;
            }
            let mut picks: Vec<usize> = index::sample(&mut rng, candidates.len(), k).into_vec();
            picks.sort_unstable();
            for pick in picks {
                if sel.full() {
                    break;
                }
                let u = candidates[pick];
                sel.add(u);
                sel.cross(v, u);
                queue.push_back(u);
            }
        }
    }
    Ok(sel.finish(cfg.subgraph, restarts, steps))
}

/// Snowball: breadth-first expansion over out-neighbors to `sb_depth` levels
/// from a random seed, re-seeding until the target is met. A level that would
/// overshoot is truncated to a uniform subset.
pub fn sample_sb(g: &WeightedDigraph, cfg: &SamplerConfig) -> Result<SampleResult> {
    cfg.validate(g)?;
    let mut rng = rng::seeded(cfg.seed, rng::stream::SAMPLER);
    let mut sel = Selection::new(g, cfg.target_nodes);
    let mut restarts = 0u64;
    let mut steps = 0u64;
    let mut queued = vec![false; g.node_count()];

    let mut first = true;
    while !sel.full() {
        if !first {
            restarts += 1;
        }
        first = false;
        let seed = sel.fresh(&mut rng);
        sel.add(seed);
        let mut frontier = vec![seed];
        for _ in 0..cfg.sb_depth {
            if sel.full() {
                break;
            }
            let mut next: Vec<(NodeId, NodeId)> = Vec::new();
            for &v in &frontier {
                steps += 1;
                for &u in g.out_neighbors(v) {
                    if !sel.contains(u) && !queued[u.index()] {
                        queued[u.index()] = true;
                        next.push((v, u));
                    }
                }
            }
            for &(_, u) in &next {
                queued[u.index()] = false;
            }
            if next.is_empty() {
                break;
            }
            if next.len() > sel.room() {
                let mut keep = index::sample(&mut rng, next.len(), sel.room()).into_vec();
                keep.sort_unstable();
                next = keep.into_iter().map(|i| next[i]).collect();
            }
            for &(parent, u) in &next {
                sel.add(u);
                sel.cross(parent, u);
            }
            frontier = next.into_iter().map(|(_, u)| u).collect();
        }
    }
    Ok(sel.finish(cfg.subgraph, restarts, steps))
}
