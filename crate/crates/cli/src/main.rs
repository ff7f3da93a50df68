//! `qpa`: verification suites and benchmark sweeps for optimal purity amplification.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid configuration,
//! 3 size limit or overflow.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpa_core::QpaError;

use crate::config::FileConfig;
use crate::output::Format;

#[derive(Debug)]
pub enum CliError {
    Check(String),
    Config(String),
    Limit(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Check(m) | CliError::Config(m) | CliError::Limit(m) => m,
        }
    }
}

impl From<QpaError> for CliError {
    fn from(e: QpaError) -> Self {
        match e {
            QpaError::SizeLimit { .. } | QpaError::Overflow(_) => CliError::Limit(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "qpa",
    version,
    about = "Optimal quantum purity amplification: checks and benchmarks"
)]
struct Cli {
    /// Master seed for every random input.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest dense Hilbert-space dimension (same as QPA_MAX_DIM).
    #[arg(long, global = true)]
    max_dim: Option<u128>,
    /// Worker threads for sweeps; output order does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON file with flat keys mirroring the flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact and leading-order fidelity for depolarized inputs.
    Fidelity(FidelityArgs),
    /// LP-vertex oracle: argmax branch per sector versus the smallest feasible row.
    Optimality(OptimalityArgs),
    /// SWAPNET Kraus identity, termination and convergence checks.
    SwapnetVerify(SwapnetVerifyArgs),
    /// SWAPNET fidelity across noise strengths and iteration counts.
    SwapnetSweep(SwapnetSweepArgs),
    /// Phase-estimation circuit against the three-step channel and the Choi form.
    GqpeVerify(GqpeVerifyArgs),
    /// Trotterized Ising benchmark under noise model 1 or 2.
    Bench(BenchArgs),
    /// Run the full invariant catalogue.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    /// Local dimensions, e.g. `2` or `2,3`.
    #[arg(long)]
    pub d: Option<String>,
    /// Copy counts, e.g. `2..8`.
    #[arg(long)]
    pub n: Option<String>,
    /// Depolarizing strengths: list or `start:end:points`.
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Args, Debug)]
pub struct OptimalityArgs {
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Args, Debug)]
pub struct SwapnetVerifyArgs {
    /// Largest power `l` in the Kraus identity check.
    #[arg(long)]
    pub max_l: Option<usize>,
    /// Iterations for the convergence check.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub lambda: Option<String>,
}

#[derive(Args, Debug)]
pub struct SwapnetSweepArgs {
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    /// Iteration counts `N_trials`.
    #[arg(long)]
    pub trials: Option<String>,
    /// Gate depolarization strengths.
    #[arg(long)]
    pub eps: Option<String>,
    /// Sample measurement histories instead of summing branches exactly.
    #[arg(long)]
    pub shots: Option<usize>,
}

#[derive(Args, Debug)]
pub struct GqpeVerifyArgs {
    /// Cases as `n x d` pairs, e.g. `2x2,3x2,3x3,4x2`.
    #[arg(long)]
    pub cases: Option<String>,
    /// Random inputs per case.
    #[arg(long)]
    pub inputs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// 1: global depolarizing after the circuit; 2: per-gate depolarizing.
    #[arg(long)]
    pub model: Option<u8>,
    /// Noise grid: list or `start:end:points`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Number of qubits in the chain.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "J")]
    pub coupling: Option<f64>,
    #[arg(long = "h")]
    pub field: Option<f64>,
    /// Evolution time.
    #[arg(long)]
    pub time: Option<f64>,
    #[arg(long)]
    pub n_trot: Option<usize>,
    /// Optimize each curve over `N_trot` (default: on for model 2).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub optimize_trotter: Option<bool>,
    #[arg(long)]
    pub trot_min: Option<usize>,
    #[arg(long)]
    pub trot_max: Option<usize>,
    /// Treat the SWAP-test Hadamards as noiseless.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub clean_hadamard: Option<bool>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub max_n: Option<usize>,
    #[arg(long)]
    pub max_d: Option<usize>,
}

/// Global settings after merging flags, config file and defaults.
pub struct Global {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let seed = file.pick(cli.seed, "seed", 2024u64)?;
    let format = file.pick(cli.format, "format", Format::Csv)?;
    let out = file.pick_opt(cli.out, "out")?;
    if let Some(max_dim) = file.pick_opt(cli.max_dim, "max_dim")? {
        if max_dim == 0 {
            return Err(CliError::Config("--max-dim must be positive".into()));
        }
        std::env::set_var(qpa_core::limits::MAX_DIM_ENV, max_dim.to_string());
    }
    if let Some(jobs) = file.pick_opt(cli.jobs, "jobs")? {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let global = Global { seed, format, out };
    match cli.command {
        Command::Fidelity(a) => commands::fidelity(&global, &file, a),
        Command::Optimality(a) => commands::optimality(&global, &file, a),
        Command::SwapnetVerify(a) => commands::swapnet_verify(&global, &file, a),
        Command::SwapnetSweep(a) => commands::swapnet_sweep(&global, &file, a),
        Command::GqpeVerify(a) => commands::gqpe_verify(&global, &file, a),
        Command::Bench(a) => commands::bench(&global, &file, a),
        Command::Verify(a) => commands::verify(&global, &file, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qpa: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
