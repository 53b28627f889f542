use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "influence", version, about = "Discrete causal-influence simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a free or accelerated scenario and write its trajectory.
    Simulate(SimulateArgs),
    /// Run invariant suites, or check a poset file.
    Verify(VerifyArgs),
    /// Draw a trajectory CSV or a poset file as SVG.
    Plot(PlotArgs),
    /// Integrate the continuum equations under a constant influence rate.
    Evolve(EvolveArgs),
    /// Change the frame of an interval.
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Free,
    #[value(alias = "accelerated")]
    Accel,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// TOML config file, or a `manifest.json` from an earlier run. Flags
    /// override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Probability of a step toward `P` (free runs).
    #[arg(long)]
    pub pr_right: Option<f64>,
    /// Net influence rate, i.e. proper acceleration (accelerated runs).
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// Initial rapidity.
    #[arg(long, allow_negative_numbers = true)]
    pub phi0: Option<f64>,
    #[arg(long)]
    pub tau0: Option<f64>,
    /// Unit steps per unit of proper time; chosen automatically if omitted.
    #[arg(long)]
    pub steps_per_tau: Option<f64>,
    /// Number of emissions.
    #[arg(long)]
    pub n: Option<u64>,
    /// Emissions per coarse-graining window.
    #[arg(long)]
    pub window: Option<u64>,
    /// Falls back to the config file, then to `INFLUENCE_SEED`.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replicas: Option<u32>,
    /// `bernoulli` or `balanced`.
    #[arg(long)]
    pub emission: Option<String>,
    /// `bernoulli` or `interval`.
    #[arg(long)]
    pub receipts: Option<String>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the explicit poset of replica 0 to `poset.txt`.
    #[arg(long)]
    pub emit_poset: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only this suite.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, env = "INFLUENCE_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Check a poset file instead of running the suites.
    #[arg(long)]
    pub fixture: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// `trajectory.csv` from `simulate`, or a poset text file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    /// Rapidity at `tau0`.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub phi0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau0: f64,
    #[arg(long, default_value_t = 10.0)]
    pub tau_end: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dtau: f64,
    /// CSV output; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, allow_negative_numbers = true, requires = "dx", conflicts_with_all = ["dp", "dq"])]
    pub dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "dt")]
    pub dx: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "dq")]
    pub dp: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "dp")]
    pub dq: Option<f64>,
    /// Boost velocity.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["k", "m"])]
    pub v: Option<f64>,
    /// Step-length ratio: `(dp, dq) -> (k dp, dq / k)`.
    #[arg(long, conflicts_with = "m")]
    pub k: Option<f64>,
    /// Projected lengths `m`, `n` of a unit interval, `k = sqrt(m / n)`.
    #[arg(long, requires = "n")]
    pub m: Option<u64>,
    #[arg(long, requires = "m")]
    pub n: Option<u64>,
}
