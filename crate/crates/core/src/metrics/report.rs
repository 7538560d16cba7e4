use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{
    avg_shortest_path, betweenness, closeness, clustering, connected_components,
    degree_distribution, fit_power_law, knn_in_curve, normalized_rich_club, pearson_assortativity,
    small_world_omega, CentralityMode, ClosenessVariant, PathMode,
};
use crate::error::{Error, Result};
use crate::graph::{DegreeMode, WeightedDigraph};
use crate::metrics::smallworld::DEFAULT_REPLICATES;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    /// `None` picks exact or pivot mode from the graph size.
    pub centrality: Option<CentralityMode>,
    /// `None` picks exact or sampled mode from the component size.
    pub path_mode: Option<PathMode>,
    pub omega_replicates: usize,
    pub richclub_replicates: usize,
    /// Thresholds for the rich-club series; `None` uses every defined one.
    pub richclub_k: Option<Vec<usize>>,
    pub seed: u64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            centrality: None,
            path_mode: None,
            omega_replicates: DEFAULT_REPLICATES,
            richclub_replicates: DEFAULT_REPLICATES,
            richclub_k: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub config: ReportConfig,
    pub scalars: BTreeMap<String, f64>,
    /// Metrics that could not be computed, with the reason.
    pub undefined: BTreeMap<String, String>,
    /// Per-node vectors, indexed like `node_labels`.
    pub per_node: BTreeMap<String, Vec<f64>>,
    pub series: BTreeMap<String, Vec<(f64, f64)>>,
    pub notes: Vec<String>,
    pub node_labels: Vec<String>,
}

impl MetricReport {
    fn scalar(&mut self, name: &str, value: f64) {
        self.scalars.insert(name.to_owned(), value);
    }

    fn undefined(&mut self, name: &str, err: &Error) {
        self.undefined.insert(name.to_owned(), err.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// All series as `series,x,y` rows.
    pub fn series_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for (name, points) in &self.series {
            for (x, y) in points {
                writeln!(out, "{name},{x},{y}").unwrap();
            }
        }
        out
    }
}

/// Exact-mode size violations are returned as errors; every other metric
/// failure is recorded under `undefined`.
pub fn compute_report(g: &WeightedDigraph, cfg: &ReportConfig) -> Result<MetricReport> {
    let n = g.node_count();
    let mut report = MetricReport {
        config: cfg.clone(),
        scalars: BTreeMap::new(),
        undefined: BTreeMap::new(),
        per_node: BTreeMap::new(),
        series: BTreeMap::new(),
        notes: Vec::new(),
        node_labels: g.labels().to_vec(),
    };
    report.scalar("nodes", n as f64);
    report.scalar("edges", g.edge_count() as f64);
    report.scalar("self_loops", g.self_loop_count() as f64);
    report.notes.push(
        "clustering, path length and rich-club use the undirected projection without self-loops; \
         closeness, betweenness and assortativity use directed hop distances"
            .into(),
    );

    for (mode, tag) in [
        (DegreeMode::Total, "total"),
        (DegreeMode::In, "in"),
        (DegreeMode::Out, "out"),
    ] {
        report.per_node.insert(
            format!("{tag}_degree"),
            g.degrees(mode).into_iter().map(|d| d as f64).collect(),
        );
        match degree_distribution(g, mode) {
            Ok(dist) => {
                report.series.insert(
                    format!("degree_pmf_{tag}"),
                    dist.support
                        .iter()
                        .map(|&k| k as f64)
                        .zip(dist.pmf.iter().copied())
                        .collect(),
                );
                match fit_power_law(&dist) {
                    Ok(fit) => {
                        report.scalar(&format!("alpha_{tag}"), fit.alpha);
                        report.scalar(&format!("alpha_{tag}_xmin"), fit.xmin as f64);
                        report.scalar(&format!("alpha_{tag}_ks"), fit.ks_gof);
                    }
                    Err(e) => report.undefined(&format!("alpha_{tag}"), &e),
                }
            }
            Err(e) => report.undefined(&format!("degree_pmf_{tag}"), &e),
        }
    }

    let c = clustering(g);
    report.scalar("C", c.average);
    report.per_node.insert("clustering".into(), c.per_node);

    let comps = connected_components(g);
    report.scalar("scc_count", comps.scc_count as f64);
    report.scalar("largest_scc_size", comps.largest_scc_size as f64);
    report.scalar("wcc_count", comps.wcc_count as f64);
    report.scalar("largest_wcc_size", comps.largest_wcc_size as f64);

    let path_mode = cfg
        .path_mode
        .unwrap_or_else(|| PathMode::auto(comps.largest_wcc_size, cfg.seed));
    match avg_shortest_path(g, path_mode, true) {
        Ok(l) => {
            report.scalar("L", l.mean);
            report.scalar("L_std_error", l.std_error);
            report.scalar("L_component_nodes", l.component_nodes as f64);
            report.notes.push(format!(
                "L restricted to the largest weakly connected component ({} nodes, {})",
                l.component_nodes,
                if l.exact {
                    "exact".to_owned()
                } else {
                    format!("{} sampled pairs", l.pairs)
                }
            ));
        }
        Err(e @ Error::GraphTooLargeForExact { .. }) => return Err(e),
        Err(e) => report.undefined("L", &e),
    }

    match small_world_omega(g, cfg.omega_replicates, cfg.seed, path_mode) {
        Ok(w) => {
            report.scalar("omega", w.omega);
            report.scalar("L_rand", w.l_rand_mean);
            report.scalar("C_latt", w.c_latt_mean);
            report.scalar("lattice_degree", w.lattice_degree as f64);
            report.notes.push(format!(
                "omega over {} replicates; lattice degree {} (nearest even to 2m/n)",
                w.replicates, w.lattice_degree
            ));
        }
        Err(e @ Error::GraphTooLargeForExact { .. }) => return Err(e),
        Err(e) => report.undefined("omega", &e),
    }

    let centrality = cfg
        .centrality
        .unwrap_or_else(|| CentralityMode::auto(n, cfg.seed));
    if let CentralityMode::Pivot { sources, .. } = centrality {
        report.notes.push(format!(
            "closeness and betweenness from {sources} pivot sources"
        ));
    }
    report.per_node.insert(
        "closeness".into(),
        closeness(g, ClosenessVariant::Standard, centrality)?,
    );
    report.per_node.insert(
        "wf_closeness".into(),
        closeness(g, ClosenessVariant::WassermanFaust, centrality)?,
    );
    report
        .per_node
        .insert("betweenness".into(), betweenness(g, centrality)?);

    match pearson_assortativity(g) {
        Ok(rho) => report.scalar("rho", rho),
        Err(e) => report.undefined("rho", &e),
    }
    let knn = knn_in_curve(g);
    report
        .series
        .insert("knn_in_printed".into(), knn.printed_series());
    report
        .series
        .insert("knn_in_mean".into(), knn.mean_series());

    let points = normalized_rich_club(
        g,
        cfg.richclub_k.as_deref(),
        cfg.richclub_replicates,
        cfg.seed,
    );
    report.series.insert(
        "rich_club".into(),
        super::rich_club(g, cfg.richclub_k.as_deref())
            .into_iter()
            .map(|(k, phi)| (k as f64, phi))
            .collect(),
    );
    report.series.insert(
        "rich_club_rand".into(),
        points.iter().map(|p| (p.k as f64, p.phi_rand)).collect(),
    );
    report.series.insert(
        "rich_club_norm".into(),
        points.iter().map(|p| (p.k as f64, p.phi_norm)).collect(),
    );
    let ordered = points.iter().filter(|p| p.rich_club_ordering).count();
    report.scalar("rich_club_ordered_points", ordered as f64);

    Ok(report)
}
