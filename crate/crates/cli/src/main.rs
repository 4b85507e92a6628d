mod commands;
mod output;
mod svg;
mod sweep_arg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

/// Activity spectra from waiting-time data.
#[derive(Parser)]
#[command(name = "spectrakit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic waiting times.
    Gen(GenArgs),
    /// Empirical survival function on the integer-second grid.
    Survival(SurvivalArgs),
    /// Regularized inversion over a sweep of μ.
    Tikhonov(TikhonovArgs),
    /// Windowed delta-comb estimate over a sweep of ΔT.
    Comb(CombArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("model").required(true).args(["exp", "ml", "mixture"])))]
pub struct GenArgs {
    /// Single exponential with rate --rate.
    #[arg(long, requires = "rate")]
    pub exp: bool,
    #[arg(long, allow_negative_numbers = true)]
    pub rate: Option<f64>,
    /// Mittag-Leffler waiting times.
    #[arg(long)]
    pub ml: bool,
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 8.85, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Exponential mixture as weight:rate pairs, e.g. 0.5:1,0.5:3.
    #[arg(long)]
    pub mixture: Option<String>,
    #[arg(long, default_value_t = 55559)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (standard output if omitted).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct InputArgs {
    /// Text file with one number per line.
    pub input: PathBuf,
    /// Treat the input as event timestamps and use their differences.
    #[arg(long)]
    pub timestamps: bool,
    /// Exclude durations above this value (session gaps).
    #[arg(long, allow_negative_numbers = true)]
    pub max_duration: Option<f64>,
}

#[derive(Args)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output CSV (standard output if omitted).
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG figure to this path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args)]
pub struct TikhonovArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Kernel spacing.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "auto_h")]
    pub h: Option<f64>,
    /// Grid size (λ and τ).
    #[arg(long, default_value_t = 196)]
    pub n: usize,
    /// Derive h from the best delta comb.
    #[arg(long)]
    pub auto_h: bool,
    #[arg(long, default_value_t = spectrakit::delta_comb::DEFAULT_H_MARGIN, allow_negative_numbers = true)]
    pub margin: f64,
    /// μ values: lo:hi:count[,log|,lin] or a comma list.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<String>,
    /// Rescale the written spectrum to unit mass.
    #[arg(long)]
    pub renormalize: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write SVG figures.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args)]
pub struct CombArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// ΔT values: lo:hi:count[,log|,lin] or a comma list.
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<String>,
    /// Discard the final incomplete window.
    #[arg(long)]
    pub drop_tail: bool,
    /// KS grid size: τ = 1..n seconds.
    #[arg(long, default_value_t = 196)]
    pub n: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write SVG figures.
    #[arg(long)]
    pub plot: bool,
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("SPECTRAKIT_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("SPECTRAKIT_THREADS={raw:?} is not a thread count"))?;
    if threads == 0 {
        bail!("SPECTRAKIT_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the thread pool")?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Survival(a) => commands::survival(a),
        Command::Tikhonov(a) => commands::tikhonov(a),
        Command::Comb(a) => commands::comb(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("spectrakit: error: {msg}");
            ExitCode::FAILURE
        }
    }
}
