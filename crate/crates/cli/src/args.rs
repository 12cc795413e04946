use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use framebound_core::{Builtin, FieldTag};

#[derive(Debug, Parser)]
#[command(name = "framebound", version, about = "Welch-type bounds and diagnostics for discrete and sampled continuous frames")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form bounds for n unit vectors in K^d.
    Bounds(BoundsArgs),
    /// Evaluate every applicable bound and metric on a frame.
    Analyze(AnalyzeArgs),
    /// Search for low-coherence or low-potential configurations.
    Optimize(OptimizeArgs),
    /// Check the (cos α, sin α) frame on [0, 2π] against the first-order bounds.
    CircleExample(CircleArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "C")]
    pub field: FieldTag,
    /// Orders m of the Welch bounds.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub orders: Vec<u32>,
    /// Exponents p > 2 of the p-Welch bound.
    #[arg(long, value_delimiter = ',')]
    pub ps: Vec<f64>,
    /// Also write the table as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "frame"])))]
pub struct AnalyzeArgs {
    /// Builtin frame, e.g. `onb:3`, `cos_sin:513`, `harmonic:7,3`, `random_unit:12,3,C,5`.
    #[arg(long)]
    pub builtin: Option<Builtin>,
    /// Frame file (JSON).
    #[arg(long)]
    pub frame: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub orders: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pub ps: Vec<f64>,
    /// Powers r > 0 of the trace bound.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub rs: Vec<f64>,
    /// Write the report as JSON to this path.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the JSON report instead of the table.
    #[arg(long)]
    pub json: bool,
    /// Write `j,k,abs_inner` for every pair j < k as CSV.
    #[arg(long)]
    pub dump_gram: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Coherence,
    Potential,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "C")]
    pub field: FieldTag,
    #[arg(long, value_enum, default_value = "coherence")]
    pub objective: ObjectiveArg,
    /// Order of the potential objective.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Iteration budget per restart.
    #[arg(long, default_value_t = 20_000)]
    pub iters: usize,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Smoothing exponents for the coherence objective.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
    pub p_schedule: Vec<f64>,
    /// Worker threads for restarts.
    #[arg(long, env = "FRAMEBOUND_JOBS", default_value_t = 1)]
    pub jobs: usize,
    /// Write the best configuration as a frame file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the run summary as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    /// Trapezoid nodes on [0, 2π], endpoints included.
    #[arg(long, default_value_t = 513)]
    pub nodes: usize,
    #[arg(long)]
    pub json: Option<PathBuf>,
}
