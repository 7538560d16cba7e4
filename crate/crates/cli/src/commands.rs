use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use txnet::evaluation::{p_sweep, FidelityScore, KernelReference, MetricProfile};
use txnet::ingest::{ingest_transactions, read_edge_list, write_edge_list, TxFormat};
use txnet::metrics::{compute_report, CentralityMode, PathMode, ReportConfig};
use txnet::rng::RNG_ALGORITHM;
use txnet::sampling::{sample as run_sampler, SamplerMethod};
use txnet::VERSION;

use crate::{
    lists, CompareArgs, Failure, FormatArg, IngestArgs, MetricsArgs, PsweepArgs, SampleArgs,
};

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

/// Record everything needed to replay a command next to its output.
fn write_manifest(out: &Path, command: &str, config: Value) -> Result<(), Failure> {
    let manifest = json!({
        "command": command,
        "txnet_version": VERSION,
        "rng": RNG_ALGORITHM,
        "config": config,
    });
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_text(&manifest_path(out), &text)
}

pub fn ingest(args: IngestArgs) -> Result<(), Failure> {
    let format = match args.format {
        FormatArg::Jsonl => TxFormat::Jsonl,
        FormatArg::Csv => TxFormat::Csv,
    };
    let (graph, stats) = ingest_transactions(&args.tx_file, format)?;
    write_edge_list(&graph, &args.out)?;
    write_manifest(
        &args.out,
        "ingest",
        json!({ "tx_file": args.tx_file, "format": format, "out": args.out }),
    )?;
    println!(
        "{}",
        serde_json::to_string(&stats).expect("stats serialize")
    );
    Ok(())
}

pub fn sample(args: SampleArgs) -> Result<(), Failure> {
    let graph = read_edge_list(&args.graph)?;
    let cfg = args.walk.config(args.method.into(), args.nodes, args.seed);
    let result = run_sampler(&graph, &cfg)?;
    write_edge_list(&result.subgraph, &args.out)?;
    write_manifest(
        &args.out,
        "sample",
        json!({
            "graph": args.graph,
            "out": args.out,
            "sampler": cfg,
            "restarts": result.restarts,
            "steps_taken": result.steps_taken,
            "sampled_edges": result.subgraph.edge_count(),
        }),
    )
}

pub fn metrics(args: MetricsArgs) -> Result<(), Failure> {
    let graph = read_edge_list(&args.graph)?;
    let mut cfg = ReportConfig {
        omega_replicates: args.omega_replicates,
        richclub_replicates: args.richclub_replicates,
        seed: args.seed,
        ..ReportConfig::default()
    };
    if args.exact {
        cfg.centrality = Some(CentralityMode::Exact);
        cfg.path_mode = Some(PathMode::Exact);
    }
    if let Some(sources) = args.pivots {
        cfg.centrality = Some(CentralityMode::Pivot {
            sources,
            seed: args.seed,
        });
    }
    if let Some(pairs) = args.path_pairs {
        cfg.path_mode = Some(PathMode::Sampled {
            pairs,
            seed: args.seed,
        });
    }
    let report = compute_report(&graph, &cfg)?;
    write_text(&args.report, &(report.to_json() + "\n"))?;
    if let Some(path) = &args.series_csv {
        write_text(path, &report.series_csv())?;
    }
    write_manifest(
        &args.report,
        "metrics",
        json!({ "graph": args.graph, "report": args.report, "series_csv": args.series_csv, "metrics": cfg }),
    )
}

#[derive(Serialize)]
struct CompareRow {
    method: String,
    seed: String,
    d_degree: f64,
    d_clustering: f64,
    d_betweenness: f64,
    d_closeness: f64,
    d_avg: f64,
    kernel: Option<f64>,
    best: String,
}

const D_COLUMNS: [&str; 5] = [
    "d_degree",
    "d_clustering",
    "d_betweenness",
    "d_closeness",
    "d_avg",
];

impl CompareRow {
    fn d_values(&self) -> [f64; 5] {
        [
            self.d_degree,
            self.d_clustering,
            self.d_betweenness,
            self.d_closeness,
            self.d_avg,
        ]
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    sum / n as f64
}

/// Per-method means, with `best` naming the columns where the method is
/// the minimum D (or maximum kernel) among methods.
fn aggregate(methods: &[SamplerMethod], seeds: usize, scores: &[FidelityScore]) -> Vec<CompareRow> {
    let mut rows: Vec<CompareRow> = methods
        .iter()
        .zip(scores.chunks(seeds))
        .map(|(m, s)| CompareRow {
            method: m.to_string(),
            seed: "mean".into(),
            d_degree: mean(s.iter().map(|f| f.d_degree)),
            d_clustering: mean(s.iter().map(|f| f.d_clustering)),
            d_betweenness: mean(s.iter().map(|f| f.d_betweenness)),
            d_closeness: mean(s.iter().map(|f| f.d_closeness)),
            d_avg: mean(s.iter().map(|f| f.d_avg)),
            kernel: s[0]
                .kernel_normalized
                .map(|_| mean(s.iter().filter_map(|f| f.kernel_normalized))),
            best: String::new(),
        })
        .collect();
    let mut marks: Vec<Vec<&str>> = vec![Vec::new(); rows.len()];
    for (c, name) in D_COLUMNS.iter().enumerate() {
        let best = rows
            .iter()
            .map(|r| r.d_values()[c])
            .fold(f64::INFINITY, f64::min);
        for (i, r) in rows.iter().enumerate() {
            if r.d_values()[c] == best {
                marks[i].push(name);
            }
        }
    }
    if let Some(best) = rows.iter().filter_map(|r| r.kernel).reduce(f64::max) {
        for (i, r) in rows.iter().enumerate() {
            if r.kernel == Some(best) {
                marks[i].push("kernel");
            }
        }
    }
    for (r, m) in rows.iter_mut().zip(marks) {
        r.best = m.join(";");
    }
    rows
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), Failure> {
    let io = |e: csv::Error| Failure {
        code: 4,
        message: format!("{}: {e}", path.display()),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| Failure::io(path, e))
}

pub fn compare(args: CompareArgs) -> Result<(), Failure> {
    let graph = read_edge_list(&args.graph)?;
    let methods = lists::methods(&args.methods)?;
    let seeds = lists::seeds(&args.seeds)?;
    let centrality = args
        .pivots
        .map(|sources| CentralityMode::Pivot { sources, seed: 0 });
    let kernel_params = args.kernel_args.params();
    // Validate every config before the expensive original-graph profile.
    for &m in &methods {
        args.walk.config(m, args.nodes, 0).validate(&graph)?;
    }
    let profile = MetricProfile::compute(&graph, centrality, 0)?;
    let reference = if args.kernel {
        Some(KernelReference::prepare(&graph, &kernel_params)?)
    } else {
        None
    };
    let runs: Vec<(SamplerMethod, u64)> = methods
        .iter()
        .flat_map(|&m| seeds.iter().map(move |&s| (m, s)))
        .collect();
    let scores: Vec<FidelityScore> = runs
        .par_iter()
        .map(|&(m, seed)| {
            let result = run_sampler(&graph, &args.walk.config(m, args.nodes, seed))?;
            FidelityScore::against(&profile, reference.as_ref(), &result.subgraph)
        })
        .collect::<txnet::Result<_>>()?;

    let mut rows: Vec<CompareRow> = runs
        .iter()
        .zip(&scores)
        .map(|(&(m, seed), f)| CompareRow {
            method: m.to_string(),
            seed: seed.to_string(),
            d_degree: f.d_degree,
            d_clustering: f.d_clustering,
            d_betweenness: f.d_betweenness,
            d_closeness: f.d_closeness,
            d_avg: f.d_avg,
            kernel: f.kernel_normalized,
            best: String::new(),
        })
        .collect();
    let aggregates = aggregate(&methods, seeds.len(), &scores);
    for a in &aggregates {
        println!(
            "{:<5} avg_d={:.4}{}{}",
            a.method,
            a.d_avg,
            a.kernel
                .map(|k| format!(" kernel={k:.4}"))
                .unwrap_or_default(),
            if a.best.is_empty() {
                String::new()
            } else {
                format!(" best={}", a.best)
            }
        );
    }
    rows.extend(aggregates);
    write_csv(&args.out, &rows)?;
    write_manifest(
        &args.out,
        "compare",
        json!({
            "graph": args.graph,
            "out": args.out,
            "methods": methods,
            "seeds": seeds,
            "nodes": args.nodes,
            "sampler_template": args.walk.config(methods[0], args.nodes, 0),
            "centrality": centrality,
            "kernel": if args.kernel { Some(kernel_params) } else { None },
            "kernel_reference_subsampled": reference.as_ref().map(|r| r.subsampled),
        }),
    )
}

#[derive(Serialize)]
struct SweepRow {
    p: f64,
    mean: f64,
    std_error: f64,
    runs: usize,
}

pub fn psweep(args: PsweepArgs) -> Result<(), Failure> {
    let graph = read_edge_list(&args.graph)?;
    let grid = lists::p_grid(&args.p_grid)?;
    let seeds = lists::seeds(&args.seeds)?;
    let template = args.walk.config(SamplerMethod::Rwfb, args.nodes, 0);
    for &p in &grid {
        let mut cfg = template.clone();
        cfg.p = p;
        cfg.validate(&graph)?;
    }
    let params = args.kernel_args.params();
    let result = p_sweep(&graph, &grid, &seeds, &template, &params)?;
    let rows: Vec<SweepRow> = result
        .points
        .iter()
        .map(|pt| SweepRow {
            p: pt.p,
            mean: pt.mean,
            std_error: pt.std_error,
            runs: pt.runs,
        })
        .collect();
    write_csv(&args.out, &rows)?;
    if let Some(peak) = result.peak() {
        println!(
            "peak p={} mean_kernel={:.6} std_error={:.6} reference_nodes={}{}",
            peak.p,
            peak.mean,
            peak.std_error,
            result.reference_nodes,
            if result.reference_subsampled {
                " (subsampled)"
            } else {
                ""
            }
        );
    }
    write_manifest(
        &args.out,
        "psweep",
        json!({
            "graph": args.graph,
            "out": args.out,
            "p_grid": grid,
            "seeds": seeds,
            "sampler_template": template,
            "kernel": params,
            "reference_nodes": result.reference_nodes,
            "reference_subsampled": result.reference_subsampled,
        }),
    )
}
