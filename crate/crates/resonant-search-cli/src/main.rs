//! Shell front end for the resonant-search library: single trajectories,
//! frequency/phase/size sweeps, the discrete-iteration baseline, and the
//! analog-versus-discrete comparison table.
//!
//! Every run is described by one flat configuration (flags, or a JSON file
//! with the same field names, flags winning). The effective configuration is
//! echoed into every output, so results name the run that produced them.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{AutoOr, EpsilonSpec, Format, Model, RunConfig, WSpec};

/// Errors split by exit code: configuration problems (2) versus runs that
/// started and then failed numerically (3).
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(msg) | CliError::Numeric(msg) => msg,
        }
    }
}

impl From<resonant_search::Error> for CliError {
    fn from(e: resonant_search::Error) -> Self {
        match &e {
            resonant_search::Error::IntegrationAborted { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// The shared configuration fields, available on every subcommand.
#[derive(Args)]
pub struct CommonFlags {
    /// JSON config file with these same field names; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Search-space size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Index of the marked basis state [default: 0].
    #[arg(long)]
    pub target: Option<usize>,
    /// Energy of the marked state [default: 1.0].
    #[arg(long)]
    pub energy: Option<f64>,
    /// Coupling strength: a number, fixed:<v>, or c-over-sqrt-n:<c>.
    #[arg(long, value_parser = EpsilonSpec::parse)]
    pub epsilon: Option<EpsilonSpec>,
    /// Coupling phase in units of pi [default: 1].
    #[arg(long)]
    pub phi_pi: Option<f64>,
    /// Hamiltonian model [default: iontrap].
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// Drive frequency: a number or "resonant" [default: resonant].
    #[arg(long, value_parser = WSpec::parse)]
    pub w: Option<WSpec>,
    /// Evolution window: a number or "auto" = 3 pi/(2 gamma) [default: auto].
    #[arg(long, value_parser = AutoOr::parse)]
    pub t_end: Option<AutoOr>,
    /// Integrator step: "auto", or a number to force fixed-step RK4
    /// [default: auto].
    #[arg(long, value_parser = AutoOr::parse)]
    pub dt: Option<AutoOr>,
    /// Success threshold in (0, 1] for first-hit reporting.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Output file [default: stdout].
    #[arg(long, alias = "output", value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Output format [default: csv].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for sweeps; RESONANT_SEARCH_WORKERS is the fallback
    /// [default: all cores].
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Axis {
    W,
    Phi,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::W => "w",
            Axis::Phi => "phi",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "kebab-case")]
pub enum Initial {
    Uniform,
    PureBeta,
}

impl Initial {
    pub fn name(self) -> &'static str {
        match self {
            Initial::Uniform => "uniform",
            Initial::PureBeta => "pure-beta",
        }
    }
}

/// When a scaling run stops: at the first population peak, or on first
/// crossing a threshold.
#[derive(Clone, Copy, Debug)]
pub enum StopSpec {
    Peak,
    Threshold(f64),
    /// `--stop threshold` without a value; the threshold field supplies it.
    ConfigThreshold,
}

impl StopSpec {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "peak" => Ok(StopSpec::Peak),
            "threshold" => Ok(StopSpec::ConfigThreshold),
            _ => {
                let v = s
                    .strip_prefix("threshold:")
                    .ok_or_else(|| format!("expected peak, threshold, or threshold:<p>, got {s}"))?;
                let p: f64 = v.parse().map_err(|_| format!("bad threshold: {v}"))?;
                Ok(StopSpec::Threshold(p))
            }
        }
    }
}

#[derive(Parser)]
#[command(name = "resonant-search", version, about = "Analog quantum search simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one run and emit the trajectory plus a peak summary.
    Simulate {
        #[command(flatten)]
        common: CommonFlags,
    },
    /// Sweep drive frequency (axis w) or coupling phase (axis phi, units of
    /// pi) and record the peak response per grid point.
    Scan {
        #[command(flatten)]
        common: CommonFlags,
        #[arg(long, value_enum)]
        axis: Axis,
        /// Lower grid edge.
        #[arg(long)]
        min: f64,
        /// Upper grid edge.
        #[arg(long)]
        max: f64,
        /// Number of grid intervals; the grid has steps + 1 points.
        #[arg(long)]
        steps: usize,
        /// Starting state for axis w [default: uniform].
        #[arg(long, value_enum, default_value = "uniform")]
        initial: Initial,
    },
    /// Fit log runtime against log size across a list of sizes.
    Scaling {
        #[command(flatten)]
        common: CommonFlags,
        /// Comma-separated sizes, at least 4, spanning a factor of 8 or more.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Coupling policy: fixed:<v> or c-over-sqrt-n:<c>; falls back to the
        /// epsilon field.
        #[arg(long, value_parser = EpsilonSpec::parse)]
        policy: Option<EpsilonSpec>,
        /// Stop rule: peak, threshold:<p>, or threshold (uses the threshold
        /// field) [default: peak].
        #[arg(long, value_parser = StopSpec::parse, default_value = "peak")]
        stop: StopSpec,
    },
    /// Run the discrete-iteration baseline once.
    Grover {
        #[command(flatten)]
        common: CommonFlags,
        /// Iteration count [default: the optimal count].
        #[arg(long, conflicts_with = "optimal")]
        k: Option<usize>,
        /// Use the optimal iteration count (the default when --k is absent).
        #[arg(long)]
        optimal: bool,
    },
    /// Tabulate analog peak times against the discrete baseline per size.
    Compare {
        #[command(flatten)]
        common: CommonFlags,
        /// Comma-separated sizes, at least 4, spanning a factor of 8 or more.
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Coupling scale: epsilon = c * energy / sqrt(n).
        #[arg(long)]
        c: f64,
    },
}

impl Command {
    fn common(&self) -> &CommonFlags {
        match self {
            Command::Simulate { common }
            | Command::Scan { common, .. }
            | Command::Scaling { common, .. }
            | Command::Grover { common, .. }
            | Command::Compare { common, .. } => common,
        }
    }
}

/// Caps the rayon pool from --workers or RESONANT_SEARCH_WORKERS; without
/// either, rayon picks the machine parallelism.
fn init_workers(flag: Option<usize>) -> Result<(), CliError> {
    let workers = match flag {
        Some(w) => Some(w),
        None => match std::env::var("RESONANT_SEARCH_WORKERS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                CliError::config(format!(
                    "RESONANT_SEARCH_WORKERS must be a positive integer, got {s:?}"
                ))
            })?),
            Err(_) => None,
        },
    };
    let Some(w) = workers else { return Ok(()) };
    if w == 0 {
        return Err(CliError::config("workers must be at least 1, got 0"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(w)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot configure {w} workers: {e}")))
}

fn run(command: &Command) -> Result<(), CliError> {
    let common = command.common();
    init_workers(common.workers)?;
    let cfg = RunConfig::merge(common)?;
    let report = match command {
        Command::Simulate { .. } => commands::cmd_simulate(&cfg)?,
        Command::Scan { axis, min, max, steps, initial, .. } => {
            commands::cmd_scan(&cfg, *axis, *min, *max, *steps, *initial)?
        }
        Command::Scaling { n_list, policy, stop, .. } => {
            commands::cmd_scaling(&cfg, n_list, *policy, *stop)?
        }
        Command::Grover { k, optimal, .. } => commands::cmd_grover(&cfg, *k, *optimal)?,
        Command::Compare { n_list, c, .. } => commands::cmd_compare(&cfg, n_list, *c)?,
    };
    output::deliver(&cfg, &report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
