use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeMode, WeightedDigraph};

/// Empirical degree distribution `P(k)` over all nodes, zero-degree included.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeDistribution {
    pub mode: DegreeMode,
    /// Realized degrees, ascending.
    pub support: Vec<usize>,
    pub pmf: Vec<f64>,
    /// Node count per support entry.
    pub counts: Vec<u64>,
    pub fitted_alpha: Option<f64>,
    pub fitted_xmin: Option<u64>,
}

impl DegreeDistribution {
    pub fn node_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.support
            .binary_search(&k)
            .map(|i| self.pmf[i])
            .unwrap_or(0.0)
    }
}

pub fn degree_distribution(g: &WeightedDigraph, mode: DegreeMode) -> Result<DegreeDistribution> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let degrees = g.degrees(mode);
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0u64; max + 1];
    for d in degrees {
        hist[d] += 1;
    }
    let n = g.node_count() as f64;
    let (mut support, mut pmf, mut counts) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &c) in hist.iter().enumerate() {
        if c > 0 {
            support.push(k);
            pmf.push(c as f64 / n);
            counts.push(c);
        }
    }
    Ok(DegreeDistribution {
        mode,
        support,
        pmf,
        counts,
        fitted_alpha: None,
        fitted_xmin: None,
    })
}
