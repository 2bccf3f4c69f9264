//! Command-line front end for the tomography pipeline: `simulate`,
//! `reconstruct`, `analyze`, and `dip`, wired for reproducible runs. Every
//! output file opens with a comment header carrying the fully resolved
//! configuration, and identical invocations produce byte-identical files.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod commands;
pub mod config;

/// Process exit codes: 0 success, 1 usage or configuration error, 2 data
/// error, 3 non-convergence.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: String) -> Self {
        Self { code: 1, message }
    }

    pub fn data(message: String) -> Self {
        Self { code: 2, message }
    }

    pub fn non_convergence(message: String) -> Self {
        Self { code: 3, message }
    }
}

impl From<ghz_tomo::Error> for CliError {
    fn from(e: ghz_tomo::Error) -> Self {
        use ghz_tomo::Error::*;
        let code = match &e {
            InvalidArgument(_) => 1,
            DimensionMismatch(_) | InvalidState(_) | DegenerateProjection { .. }
            | NonPhysical(_) | SingularSystem(_) | Parse { .. } | IncompleteSet(_)
            | TrialFailed { .. } => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ghz-tomo",
    about = "Three-photon polarization tomography: simulate counts, reconstruct the state, analyze entanglement",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a 64-setting coincidence acquisition from a preset state.
    Simulate(SimulateArgs),
    /// Reconstruct the density matrix from a count table.
    Reconstruct(ReconstructArgs),
    /// Compute fidelity, witness, Mermin, and concurrences from a state file.
    Analyze(AnalyzeArgs),
    /// Simulate and fit the two-photon interference dip.
    Dip(DipArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Optional TOML config; flags override file values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// State preset: ghz, werner:P, or file:PATH [default: ghz].
    #[arg(long)]
    pub preset: Option<String>,
    /// Flux 𝒩 — expected total counts over the {H,V} block [default: 930].
    #[arg(long)]
    pub flux: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Acquisition duration per setting in seconds [default: 900].
    #[arg(long)]
    pub duration: Option<f64>,
    /// Trigger-detector singles per acquisition [default: 1000000].
    #[arg(long)]
    pub trigger_singles: Option<u64>,
    /// Flat accidental-coincidence rate in events/s [default: 0].
    #[arg(long)]
    pub accidental_rate: Option<f64>,
    /// Optimizer restarts for the echoed true-state analysis [default: 16].
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Count table produced by `simulate` (or laboratory tooling).
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Reconstruction method: mle or linear [default: mle].
    #[arg(long)]
    pub method: Option<String>,
    /// Fit objective: poisson or gaussian [default: poisson].
    #[arg(long)]
    pub objective: Option<String>,
    /// Fit restarts: the warm start plus random draws [default: 5].
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Reconstructed state file.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Companion count table, required when trials > 0.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Monte-Carlo trials for error bars [default: 0, disabled].
    #[arg(long)]
    pub trials: Option<usize>,
    /// Optimizer restarts for witness and Mermin searches [default: 32].
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Optimizer restarts inside Monte-Carlo trials [default: 8].
    #[arg(long)]
    pub mc_restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DipArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Peak overlap fraction (the dip visibility) [default: 0.69].
    #[arg(long)]
    pub epsilon0: Option<f64>,
    /// Gaussian envelope width in µm [default: 25].
    #[arg(long)]
    pub width: Option<f64>,
    /// Scan positions as min:max:count [default: -100:100:41].
    #[arg(long)]
    pub positions: Option<String>,
    /// Expected counts per point far from the dip [default: 2000].
    #[arg(long)]
    pub events_per_point: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses arguments and runs the requested command, returning the process
/// exit code. String output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version through the same error channel.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };

    let outcome = match cli.command {
        Command::Simulate(a) => config::SimulateConfig::resolve(
            a.config.as_deref(),
            a.preset,
            a.flux,
            a.seed,
            a.duration,
            a.trigger_singles,
            a.accidental_rate,
            a.restarts,
            a.out,
        )
        .and_then(|cfg| commands::cmd_simulate(&cfg)),
        Command::Reconstruct(a) => config::ReconstructConfig::resolve(
            a.config.as_deref(),
            a.input,
            a.method,
            a.objective,
            a.restarts,
            a.seed,
            a.out,
        )
        .and_then(|cfg| commands::cmd_reconstruct(&cfg)),
        Command::Analyze(a) => config::AnalyzeConfig::resolve(
            a.config.as_deref(),
            a.input,
            a.counts,
            a.trials,
            a.restarts,
            a.mc_restarts,
            a.seed,
            a.out,
        )
        .and_then(|cfg| commands::cmd_analyze(&cfg)),
        Command::Dip(a) => config::DipCliConfig::resolve(
            a.config.as_deref(),
            a.epsilon0,
            a.width,
            a.positions,
            a.events_per_point,
            a.seed,
            a.out,
        )
        .and_then(|cfg| commands::cmd_dip(&cfg)),
    };

    match outcome {
        Ok(message) => {
            println!("{message}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
