use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Multilevel Monte Carlo convergence studies for parabolic problems with
/// random jump coefficients.
#[derive(Debug, Parser)]
#[command(name = "jumpmc", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a relative-RMSE convergence study and write CSV, SVG and a manifest.
    Run(RunArgs),
    /// Print the level schedule for one method.
    Schedule(ScheduleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML problem file; missing keys take the reference defaults.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated methods, e.g. `adapted,nonadapted,coupled` or `adapted-standard`.
    #[arg(long)]
    pub methods: Option<String>,
    /// Inclusive level range such as `0..3`.
    #[arg(long)]
    pub levels: Option<String>,
    /// Estimator replications per method and level.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Level of the reference run; must exceed every studied level.
    #[arg(long = "ref-level")]
    pub ref_level: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "JUMPMC_THREADS")]
    pub threads: Option<usize>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Where the reference value is cached; defaults to the output directory.
    #[arg(long = "cache-dir")]
    pub cache_dir: Option<PathBuf>,
    /// Suppress progress messages on stderr.
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    /// `adapted` or `nonadapted`.
    #[arg(long, default_value = "adapted")]
    pub method: String,
    /// Finest level L.
    #[arg(long, default_value_t = 3)]
    pub level: usize,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Weight budget; defaults to 2 (adapted) or 1 (nonadapted).
    #[arg(long = "c-rho")]
    pub c_rho: Option<f64>,
}
