use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;

/// Degree correlation over directed edges: source out-degree against target
/// in-degree. Sums are kept in exact integers.
pub fn pearson_assortativity(g: &WeightedDigraph) -> Result<f64> {
    let m = g.edge_count();
    if m < 2 {
        return Err(Error::InsufficientData(
            "assortativity needs at least two edges".into(),
        ));
    }
    let (mut prod, mut sum, mut sq) = (0i128, 0i128, 0i128);
    for e in g.edges() {
        let ki = g.out_degree(e.src) as i128;
        let kj = g.in_degree(e.dst) as i128;
        prod += ki * kj;
        sum += ki + kj;
        sq += ki * ki + kj * kj;
    }
    let m = m as i128;
    let num = 4 * m * prod - sum * sum;
    let den = 2 * m * sq - sum * sum;
    if den == 0 {
        return Err(Error::DegenerateVariance(
            "all edge-endpoint degrees are equal".into(),
        ));
    }
    Ok(num as f64 / den as f64)
}

/// Mean in-degree of out-neighbors, grouped by out-degree.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct KnnCurve {
    /// Realized out-degrees, ascending, zero excluded.
    pub k_out: Vec<usize>,
    /// `sum over nodes with this out-degree of (k_cn / N) * P(k_out)`.
    pub printed: Vec<f64>,
    /// Plain mean of `k_cn` over nodes with this out-degree.
    pub mean: Vec<f64>,
}

impl KnnCurve {
    pub fn printed_series(&self) -> Vec<(f64, f64)> {
        self.k_out
            .iter()
            .map(|&k| k as f64)
            .zip(self.printed.iter().copied())
            .collect()
    }

    pub fn mean_series(&self) -> Vec<(f64, f64)> {
        self.k_out
            .iter()
            .map(|&k| k as f64)
            .zip(self.mean.iter().copied())
            .collect()
    }
}

pub fn knn_in_curve(g: &WeightedDigraph) -> KnnCurve {
    let n = g.node_count();
    if n == 0 {
        return KnnCurve::default();
    }
    let max_out = g.nodes().map(|v| g.out_degree(v)).max().unwrap_or(0);
    let mut sum_cn = vec![0f64; max_out + 1];
    let mut count = vec![0u64; max_out + 1];
    for v in g.nodes() {
        let k = g.out_degree(v);
        count[k] += 1;
        if k == 0 {
            continue;
        }
        let neighbor_in: usize = g.out_neighbors(v).iter().map(|&w| g.in_degree(w)).sum();
        sum_cn[k] += neighbor_in as f64 / k as f64;
    }
    let mut curve = KnnCurve::default();
    for k in 1..=max_out {
        if count[k] == 0 {
            continue;
        }
        let p = count[k] as f64 / n as f64;
        curve.k_out.push(k);
        curve.printed.push(sum_cn[k] / n as f64 * p);
        curve.mean.push(sum_cn[k] / count[k] as f64);
    }
    curve
}
