//! Brute-force reference computations on tiny graphs, written against a
//! plain adjacency matrix so they share nothing with the library.

// Matrix loops read closer to the definitions than iterator chains here.
#![allow(clippy::needless_range_loop)]

use rand::Rng;
use txnet::WeightedDigraph;

pub const UNREACHABLE: usize = usize::MAX;

/// Simple digraph as a boolean adjacency matrix. Self-loops allowed.
#[derive(Clone, Debug)]
pub struct Tiny {
    pub n: usize,
    pub arc: Vec<Vec<bool>>,
    /// Arcs as generated, duplicates included, for building the library graph.
    pub raw: Vec<(usize, usize)>,
}

impl Tiny {
    pub fn random(rng: &mut impl Rng, max_nodes: usize) -> Tiny {
        let n = rng.random_range(1..=max_nodes);
        let density: f64 = rng.random();
        let mut raw = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let p = if i == j { 0.1 } else { density };
                if rng.random_bool(p) {
                    raw.push((i, j));
                    // occasional parallel transaction
                    if rng.random_bool(0.1) {
                        raw.push((i, j));
                    }
                }
            }
        }
        Tiny::from_arcs(n, raw)
    }

    pub fn from_arcs(n: usize, raw: Vec<(usize, usize)>) -> Tiny {
        let mut arc = vec![vec![false; n]; n];
        for &(i, j) in &raw {
            arc[i][j] = true;
        }
        Tiny { n, arc, raw }
    }

    pub fn to_graph(&self) -> WeightedDigraph {
        WeightedDigraph::from_index_edges(self.n, self.raw.iter().map(|&(i, j)| (i, j, 1.0)))
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arc[v].iter().filter(|&&a| a).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.arc[u][v]).count()
    }

    pub fn arc_count(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).sum()
    }

    /// Symmetric loop-free version.
    pub fn undirected(&self) -> Tiny {
        let mut raw = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j && (self.arc[i][j] || self.arc[j][i]) {
                    raw.push((i, j));
                }
            }
        }
        Tiny::from_arcs(self.n, raw)
    }

    /// Floyd-Warshall hop distances.
    pub fn distances(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut d = vec![vec![UNREACHABLE; n]; n];
        for i in 0..n {
            for j in 0..n {
                if self.arc[i][j] {
                    d[i][j] = 1;
                }
            }
            d[i][i] = 0;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] != UNREACHABLE
                        && d[k][j] != UNREACHABLE
                        && d[i][k] + d[k][j] < d[i][j]
                    {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        d
    }

    /// Reflexive transitive closure by Warshall's algorithm.
    pub fn closure(&self) -> Vec<Vec<bool>> {
        let n = self.n;
        let mut r = self.arc.clone();
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if r[i][k] {
                    for j in 0..n {
                        if r[k][j] {
                            r[i][j] = true;
                        }
                    }
                }
            }
        }
        r
    }
}

/// Every simple path from `s` to `t`, as node sequences.
fn simple_paths(g: &Tiny, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Tiny, t: usize, path: &mut Vec<usize>, on: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for w in 0..g.n {
            if g.arc[v][w] && !on[w] {
                on[w] = true;
                path.push(w);
                walk(g, t, path, on, out);
                path.pop();
                on[w] = false;
            }
        }
    }
    let mut on = vec![false; g.n];
    on[s] = true;
    let mut out = Vec::new();
    walk(g, t, &mut vec![s], &mut on, &mut out);
    out
}

/// Sum over ordered pairs of the share of shortest paths through each node.
pub fn betweenness(g: &Tiny) -> Vec<f64> {
    let mut score = vec![0.0; g.n];
    for s in 0..g.n {
        for t in 0..g.n {
            if s == t {
                continue;
            }
            let paths = simple_paths(g, s, t);
            let Some(shortest) = paths.iter().map(Vec::len).min() else {
                continue;
            };
            let geodesics: Vec<&Vec<usize>> =
                paths.iter().filter(|p| p.len() == shortest).collect();
            let total = geodesics.len() as f64;
            for p in &geodesics {
                for &v in &p[1..p.len() - 1] {
                    score[v] += 1.0 / total;
                }
            }
        }
    }
    score
}

/// Closeness from incoming distances, optionally scaled by reach.
pub fn closeness(g: &Tiny, wasserman_faust: bool) -> Vec<f64> {
    let d = g.distances();
    (0..g.n)
        .map(|i| {
            let incoming: Vec<usize> = (0..g.n)
                .filter(|&s| s != i && d[s][i] != UNREACHABLE)
                .map(|s| d[s][i])
                .collect();
            if incoming.is_empty() {
                return 0.0;
            }
            let reach = incoming.len() as f64;
            let standard = reach / incoming.iter().sum::<usize>() as f64;
            if wasserman_faust {
                standard * reach / (g.n - 1) as f64
            } else {
                standard
            }
        })
        .collect()
}

/// Local clustering on the projection by triangle census, and its mean.
pub fn clustering(g: &Tiny) -> (Vec<f64>, f64) {
    let u = g.undirected();
    let local: Vec<f64> = (0..u.n)
        .map(|v| {
            let nb: Vec<usize> = (0..u.n).filter(|&w| u.arc[v][w]).collect();
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            let mut links = 0;
            for a in 0..k {
                for b in a + 1..k {
                    if u.arc[nb[a]][nb[b]] {
                        links += 1;
                    }
                }
            }
            links as f64 / (k * (k - 1) / 2) as f64
        })
        .collect();
    let mean = local.iter().sum::<f64>() / u.n as f64;
    (local, mean)
}

/// Classes of a symmetric reachability relation, each listed by members.
fn classes(mutual: impl Fn(usize, usize) -> bool, n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&j| mutual(i, j)).collect();
        for &j in &members {
            seen[j] = true;
        }
        out.push(members);
    }
    out
}

/// (count, largest size) for strongly and weakly connected components.
pub fn components(g: &Tiny) -> ((usize, usize), (usize, usize)) {
    let r = g.closure();
    let strong = classes(|i, j| r[i][j] && r[j][i], g.n);
    let ru = g.undirected().closure();
    let weak = classes(|i, j| ru[i][j], g.n);
    let summary = |c: &[Vec<usize>]| (c.len(), c.iter().map(Vec::len).max().unwrap_or(0));
    (summary(&strong), summary(&weak))
}

/// Mean projection distance over ordered pairs of the largest weak
/// component (ties: the one holding the smallest node). `None` below two
/// nodes.
pub fn average_path_length(g: &Tiny) -> Option<f64> {
    let u = g.undirected();
    let ru = u.closure();
    let weak = classes(|i, j| ru[i][j], g.n);
    let mut best: &Vec<usize> = &weak[0];
    for c in &weak {
        if c.len() > best.len() {
            best = c;
        }
    }
    if best.len() < 2 {
        return None;
    }
    let d = u.distances();
    let mut total = 0usize;
    let mut pairs = 0usize;
    for &a in best {
        for &b in best {
            if a != b {
                total += d[a][b];
                pairs += 1;
            }
        }
    }
    Some(total as f64 / pairs as f64)
}

#[derive(Debug, PartialEq)]
pub enum Rho {
    Value(f64),
    TooFewEdges,
    Degenerate,
}

/// Degree correlation over arcs, source out-degree against target
/// in-degree, as the textbook ratio of edge averages.
pub fn assortativity(g: &Tiny) -> Rho {
    let mut pairs = Vec::new();
    for i in 0..g.n {
        for j in 0..g.n {
            if g.arc[i][j] {
                pairs.push((g.out_degree(i) as f64, g.in_degree(j) as f64));
            }
        }
    }
    if pairs.len() < 2 {
        return Rho::TooFewEdges;
    }
    let inv_m = 1.0 / pairs.len() as f64;
    let mut mixed = 0.0;
    let mut half_sum = 0.0;
    let mut half_sq = 0.0;
    for &(ki, kj) in &pairs {
        mixed += ki * kj;
        half_sum += 0.5 * (ki + kj);
        half_sq += 0.5 * (ki * ki + kj * kj);
    }
    let mean = inv_m * half_sum;
    let num = inv_m * mixed - mean * mean;
    let den = inv_m * half_sq - mean * mean;
    if den.abs() < 1e-12 {
        Rho::Degenerate
    } else {
        Rho::Value(num / den)
    }
}

/// phi(k) on the projection for every k with at least two nodes above it.
pub fn rich_club(g: &Tiny) -> Vec<(usize, f64)> {
    let u = g.undirected();
    let degree: Vec<usize> = (0..u.n).map(|v| u.out_degree(v)).collect();
    let max = degree.iter().copied().max().unwrap_or(0);
    let mut out = Vec::new();
    for k in 0..=max {
        let club: Vec<usize> = (0..u.n).filter(|&v| degree[v] > k).collect();
        if club.len() < 2 {
            continue;
        }
        let mut links = 0;
        for a in 0..club.len() {
            for b in a + 1..club.len() {
                if u.arc[club[a]][club[b]] {
                    links += 1;
                }
            }
        }
        let size = club.len() as f64;
        out.push((k, 2.0 * links as f64 / (size * (size - 1.0))));
    }
    out
}

/// Shortest-path kernel by looping over every pair of reachable ordered pairs.
pub fn sp_kernel(
    a: &Tiny,
    b: &Tiny,
    vertex: impl Fn(usize, usize) -> f64,
    length: impl Fn(usize, usize) -> f64,
) -> f64 {
    let (da, db) = (a.distances(), b.distances());
    let degree = |g: &Tiny, v: usize| g.in_degree(v) + g.out_degree(v);
    let mut total = 0.0;
    for u in 0..a.n {
        for v in 0..a.n {
            if u == v || da[u][v] == UNREACHABLE {
                continue;
            }
            for w in 0..b.n {
                for z in 0..b.n {
                    if w == z || db[w][z] == UNREACHABLE {
                        continue;
                    }
                    total += vertex(degree(a, u), degree(b, w))
                        * vertex(degree(a, v), degree(b, z))
                        * length(da[u][v], db[w][z]);
                }
            }
        }
    }
    total
}

/// Discrete power-law variates `P(x) ∝ x^-alpha`, `x >= 1`, by Devroye's
/// rejection from the continuous Pareto envelope. Draws above `cap` are
/// redrawn.
pub fn zipf_samples(rng: &mut impl Rng, alpha: f64, count: usize, cap: f64) -> Vec<u64> {
    let b = 2f64.powf(alpha - 1.0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let u = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        let x = u.powf(-1.0 / (alpha - 1.0)).floor();
        if x > cap {
            continue;
        }
        let t = (1.0 + 1.0 / x).powf(alpha - 1.0);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            out.push(x as u64);
        }
    }
    out
}
