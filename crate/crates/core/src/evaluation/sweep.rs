use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{KernelParams, KernelReference};
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::sampling::{sample, SamplerConfig, SamplerMethod};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub p: f64,
    /// Mean normalized kernel over seeds.
    pub mean: f64,
    pub std_error: f64,
    pub runs: usize,
    /// Per-seed kernel values in seed order.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub reference_nodes: usize,
    pub reference_subsampled: bool,
}

impl SweepResult {
    /// Point with the highest mean; the first wins ties.
    pub fn peak(&self) -> Option<&SweepPoint> {
        self.points
            .iter()
            .reduce(|best, q| if q.mean > best.mean { q } else { best })
    }
}

/// Kernel similarity of RWFB samples to `g` for each flying-back
/// probability. Every `p` uses the same seeds. `template` supplies the target
/// size and walk options; its method, `p` and seed are overridden.
pub fn p_sweep(
    g: &WeightedDigraph,
    p_values: &[f64],
    seeds: &[u64],
    template: &SamplerConfig,
    kernel: &KernelParams,
) -> Result<SweepResult> {
    if p_values.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidConfig(
            "sweep needs at least one p and one seed".into(),
        ));
    }
    let reference = KernelReference::prepare(g, kernel)?;
    let runs: Vec<(usize, u64)> = (0..p_values.len())
        .flat_map(|i| seeds.iter().map(move |&s| (i, s)))
        .collect();
    let values: Vec<f64> = runs
        .par_iter()
        .map(|&(i, seed)| {
            let mut cfg = template.clone();
            cfg.method = SamplerMethod::Rwfb;
            cfg.p = p_values[i];
            cfg.seed = seed;
            let result = sample(g, &cfg)?;
            reference.compare(&result.subgraph)
        })
        .collect::<Result<_>>()?;
    let k = seeds.len();
    let points = p_values
        .iter()
        .zip(values.chunks(k))
        .map(|(&p, vals)| {
            let mean = vals.iter().sum::<f64>() / k as f64;
            let std_error = if k > 1 {
                let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
                (var / k as f64).sqrt()
            } else {
                0.0
            };
            SweepPoint {
                p,
                mean,
                std_error,
                runs: k,
                values: vals.to_vec(),
            }
        })
        .collect();
    Ok(SweepResult {
        points,
        reference_nodes: reference.node_count,
        reference_subsampled: reference.subsampled,
    })
}
