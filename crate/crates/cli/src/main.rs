mod commands;
mod lists;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use txnet::sampling::{RestartPolicy, SamplerMethod, SubgraphMode};
use txnet::Error;

#[derive(Parser)]
#[command(
    name = "txnet",
    version,
    about = "Transaction-network construction, sampling and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an edge list from a transaction dump.
    Ingest(IngestArgs),
    /// Sample a subgraph.
    Sample(SampleArgs),
    /// Compute the full metric report of a graph.
    Metrics(MetricsArgs),
    /// Score samplers against the original graph.
    Compare(CompareArgs),
    /// Kernel similarity of RWFB samples across flying-back probabilities.
    Psweep(PsweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Jsonl,
    Csv,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    tx_file: PathBuf,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rwfb,
    Rws,
    Rn,
    Re,
    Ff,
    Sb,
}

impl From<MethodArg> for SamplerMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Rwfb => SamplerMethod::Rwfb,
            MethodArg::Rws => SamplerMethod::Rws,
            MethodArg::Rn => SamplerMethod::Rn,
            MethodArg::Re => SamplerMethod::Re,
            MethodArg::Ff => SamplerMethod::Ff,
            MethodArg::Sb => SamplerMethod::Sb,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum RestartArg {
    RestartToStart,
    StayAtCurrent,
}

#[derive(Clone, Copy, ValueEnum)]
enum SubgraphArg {
    Induced,
    Traversed,
}

/// Sampler tunables shared by `sample`, `compare` and `psweep`.
#[derive(Args, Clone)]
struct WalkArgs {
    /// Flying-back probability (RWFB).
    #[arg(long, default_value_t = txnet::sampling::DEFAULT_FLY_BACK)]
    p: f64,
    #[arg(long, value_enum, default_value = "restart-to-start")]
    restart_policy: RestartArg,
    #[arg(long, value_enum, default_value = "induced")]
    subgraph: SubgraphArg,
    /// Forward-burning probability (FF).
    #[arg(long, default_value_t = txnet::sampling::DEFAULT_FF_FORWARD_PROB)]
    ff_forward_prob: f64,
    /// Snowball depth (SB).
    #[arg(long, default_value_t = txnet::sampling::DEFAULT_SB_DEPTH)]
    sb_depth: usize,
    /// Steps without a new node before a walk restarts elsewhere.
    #[arg(long, default_value_t = txnet::sampling::DEFAULT_STALL_STEPS)]
    stall_steps: usize,
}

impl WalkArgs {
    fn config(
        &self,
        method: SamplerMethod,
        nodes: usize,
        seed: u64,
    ) -> txnet::sampling::SamplerConfig {
        let mut cfg = txnet::sampling::SamplerConfig::new(method, nodes, seed).with_p(self.p);
        cfg.restart_policy = match self.restart_policy {
            RestartArg::RestartToStart => RestartPolicy::RestartToStart,
            RestartArg::StayAtCurrent => RestartPolicy::StayAtCurrent,
        };
        cfg.subgraph = match self.subgraph {
            SubgraphArg::Induced => SubgraphMode::Induced,
            SubgraphArg::Traversed => SubgraphMode::Traversed,
        };
        cfg.ff_forward_prob = self.ff_forward_prob;
        cfg.sb_depth = self.sb_depth;
        cfg.stall_steps = self.stall_steps;
        cfg
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Target node count.
    #[arg(long)]
    nodes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// JSON report path.
    #[arg(long)]
    report: PathBuf,
    /// Force exact all-pairs algorithms regardless of size.
    #[arg(long, conflicts_with = "pivots")]
    exact: bool,
    /// Pivot sources for closeness and betweenness.
    #[arg(long)]
    pivots: Option<usize>,
    /// Sampled pairs for path length (default: exact up to the size limit).
    #[arg(long, conflicts_with = "exact")]
    path_pairs: Option<usize>,
    #[arg(long, default_value_t = txnet::metrics::smallworld::DEFAULT_REPLICATES)]
    omega_replicates: usize,
    #[arg(long, default_value_t = txnet::metrics::smallworld::DEFAULT_REPLICATES)]
    richclub_replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write every series as CSV.
    #[arg(long)]
    series_csv: Option<PathBuf>,
}

/// Kernel options shared by `compare` and `psweep`.
#[derive(Args, Clone)]
struct KernelArgs {
    /// Largest graph the kernel runs on; bigger references are subsampled.
    #[arg(long, default_value_t = txnet::evaluation::DEFAULT_KERNEL_NODE_CAP)]
    kernel_cap: usize,
    /// Gaussian width for degree comparison (delta when omitted).
    #[arg(long)]
    degree_sigma: Option<f64>,
    /// Gaussian width for path-length comparison (delta when omitted).
    #[arg(long)]
    length_sigma: Option<f64>,
    /// Seed of the reference subsample.
    #[arg(long, default_value_t = 0)]
    reference_seed: u64,
}

impl KernelArgs {
    fn params(&self) -> txnet::evaluation::KernelParams {
        use txnet::evaluation::BaseKernel;
        let base =
            |s: Option<f64>| s.map_or(BaseKernel::Delta, |sigma| BaseKernel::Gaussian { sigma });
        txnet::evaluation::KernelParams {
            vertex: base(self.degree_sigma),
            length: base(self.length_sigma),
            node_cap: self.kernel_cap,
            reference_seed: self.reference_seed,
        }
    }
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated sampler names.
    #[arg(long, default_value = "rwfb,rws,rn,re,ff,sb")]
    methods: String,
    #[arg(long)]
    nodes: usize,
    /// Comma-separated seeds or `a..b` ranges.
    #[arg(long)]
    seeds: String,
    /// Add the normalized graph-kernel column.
    #[arg(long)]
    kernel: bool,
    /// Pivot sources for centralities of the original graph.
    #[arg(long)]
    pivots: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    kernel_args: KernelArgs,
}

#[derive(Args)]
struct PsweepArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Comma-separated p values or `start:step:end` grids.
    #[arg(long)]
    p_grid: String,
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    seeds: String,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    walk: WalkArgs,
    #[command(flatten)]
    kernel_args: KernelArgs,
}

/// Failure with its process exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Failure {
            code: 4,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
            Error::Io { .. } => 4,
            Error::GraphTooLargeForExact { .. } | Error::GraphTooLarge { .. } => 3,
            _ => 2,
        };
        let mut message = err.to_string();
        if code == 3 {
            message.push_str("; use --pivots / --path-pairs, or pre-sample the graph");
        }
        Failure { code, message }
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("TXNET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::usage(format!(
            "TXNET_THREADS must be a positive integer, got `{value}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::usage(e.to_string()))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Sample(a) => commands::sample(a),
        Command::Metrics(a) => commands::metrics(a),
        Command::Compare(a) => commands::compare(a),
        Command::Psweep(a) => commands::psweep(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("txnet: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
