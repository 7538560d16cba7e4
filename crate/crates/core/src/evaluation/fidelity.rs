use serde::{Deserialize, Serialize};

use super::kernel::{KernelParams, KernelReference};
use super::ks::ks_d;
use crate::error::{Error, Result};
use crate::graph::{DegreeMode, WeightedDigraph};
use crate::metrics::{betweenness, closeness, clustering, CentralityMode, ClosenessVariant};

/// Per-node metric vectors compared between an original and a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricProfile {
    /// Total degree.
    pub degree: Vec<f64>,
    pub clustering: Vec<f64>,
    /// Betweenness divided by `(n - 1)(n - 2)` so graphs of different size
    /// share a scale.
    pub betweenness: Vec<f64>,
    /// Wasserman-Faust closeness.
    pub closeness: Vec<f64>,
}

impl MetricProfile {
    /// `centrality` of `None` chooses exact or pivot mode from graph size.
    pub fn compute(
        g: &WeightedDigraph,
        centrality: Option<CentralityMode>,
        seed: u64,
    ) -> Result<Self> {
        if g.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = g.node_count();
        let mode = centrality.unwrap_or_else(|| CentralityMode::auto(n, seed));
        let scale = if n > 2 {
            1.0 / ((n - 1) as f64 * (n - 2) as f64)
        } else {
            0.0
        };
        Ok(MetricProfile {
            degree: g
                .degrees(DegreeMode::Total)
                .into_iter()
                .map(|d| d as f64)
                .collect(),
            clustering: clustering(g).per_node,
            betweenness: betweenness(g, mode)?
                .into_iter()
                .map(|b| b * scale)
                .collect(),
            closeness: closeness(g, ClosenessVariant::WassermanFaust, mode)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityScore {
    pub d_degree: f64,
    pub d_clustering: f64,
    pub d_betweenness: f64,
    pub d_closeness: f64,
    /// Mean of the four D statistics.
    pub d_avg: f64,
    pub kernel_normalized: Option<f64>,
    pub kernel_node_cap: Option<usize>,
    /// Set when the kernel reference was subsampled down to the cap.
    pub kernel_reference_seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FidelityConfig {
    /// Centrality mode for the original graph; samples always run exact.
    pub centrality: Option<CentralityMode>,
    pub seed: u64,
    pub kernel: Option<KernelParams>,
}

impl FidelityScore {
    /// Score `sampled` against an already-profiled original.
    pub fn against(
        original: &MetricProfile,
        kernel_reference: Option<&KernelReference>,
        sampled: &WeightedDigraph,
    ) -> Result<Self> {
        let s = MetricProfile::compute(sampled, Some(CentralityMode::Exact), 0)?;
        let d_degree = ks_d(&original.degree, &s.degree)?;
        let d_clustering = ks_d(&original.clustering, &s.clustering)?;
        let d_betweenness = ks_d(&original.betweenness, &s.betweenness)?;
        let d_closeness = ks_d(&original.closeness, &s.closeness)?;
        let kernel = kernel_reference.map(|r| r.compare(sampled)).transpose()?;
        Ok(FidelityScore {
            d_degree,
            d_clustering,
            d_betweenness,
            d_closeness,
            d_avg: (d_degree + d_clustering + d_betweenness + d_closeness) / 4.0,
            kernel_normalized: kernel,
            kernel_node_cap: kernel_reference.map(|r| r.params().node_cap),
            kernel_reference_seed: kernel_reference
                .filter(|r| r.subsampled)
                .map(|r| r.params().reference_seed),
        })
    }
}

pub fn fidelity(
    original: &WeightedDigraph,
    sampled: &WeightedDigraph,
    cfg: &FidelityConfig,
) -> Result<FidelityScore> {
    let profile = MetricProfile::compute(original, cfg.centrality, cfg.seed)?;
    let reference = cfg
        .kernel
        .as_ref()
        .map(|p| KernelReference::prepare(original, p))
        .transpose()?;
    FidelityScore::against(&profile, reference.as_ref(), sampled)
}
