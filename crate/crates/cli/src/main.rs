//! Command-line front end for the slender-swimmer kinematics library.
//!
//! Subcommands:
//! - `simulate`: run a shape program and emit trajectory, snapshots, plots.
//! - `purcell-scan`: rank-condition scan over the joint-angle grid.
//! - `sweep`: repeat a simulation over a list of parameter values.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical or I/O failure.

mod commands;
mod config;
mod output;
mod tabulated;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use commands::{build_deterministic, resolve_mode, scan_bundle, simulate_bundle, sweep_bundle};
use config::Config;

/// Command-line error with the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or arguments (exit code 2).
    Config(String),
    /// Numerical failure or I/O problem during the run (exit code 3).
    Runtime(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn runtime(msg: String) -> Self {
        CliError::Runtime(msg)
    }

    pub fn numerical(e: coxswim_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Runtime(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "coxswim",
    version,
    about = "Deterministic slender-swimmer kinematics: simulations, controllability scans, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a shape program and write trajectory.csv, shape snapshots,
    /// plots.svg, and run_meta.json.
    Simulate(CommonArgs),
    /// Evaluate the weak/strong rank conditions over a joint-angle grid and
    /// write rank_map.csv and summary.json.
    PurcellScan(CommonArgs),
    /// Re-run the simulation over a list of values of one parameter and
    /// write sweep.csv.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Coupling mode override: paper (head-only resistance) or full
    /// (full-body coupling).
    #[arg(long)]
    mode: Option<String>,
    /// Validate determinism: compute every output twice and require
    /// byte-identical results before writing (the pipeline has no RNG).
    #[arg(long)]
    seedless: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Parameter to vary (h, delta, beta, c1, c2, c3, dt); defaults to the
    /// config's [sweep] section.
    #[arg(long)]
    param: Option<String>,
    /// Comma-separated list of values; defaults to the config's [sweep]
    /// section.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let (config, dir) = load(&args)?;
            let bundle =
                build_deterministic(args.seedless, || simulate_bundle(&config, &dir))?;
            bundle.write_to(&args.out)?;
            Ok(())
        }
        Command::PurcellScan(args) => {
            let (config, _) = load(&args)?;
            let bundle = build_deterministic(args.seedless, || scan_bundle(&config))?;
            bundle.write_to(&args.out)?;
            Ok(())
        }
        Command::Sweep(args) => {
            let (config, dir) = load(&args.common)?;
            let (parameter, values) = sweep_spec(&args, &config)?;
            let bundle = build_deterministic(args.common.seedless, || {
                sweep_bundle(&config, &dir, &parameter, &values)
            })?;
            bundle.write_to(&args.common.out)?;
            Ok(())
        }
    }
}

fn load(args: &CommonArgs) -> Result<(Config, PathBuf), CliError> {
    let config = Config::load(&args.config)?;
    let resolved = resolve_mode(&config, args.mode.as_deref())?;
    let dir = args
        .config
        .parent()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."));
    Ok((resolved, dir))
}

fn sweep_spec(args: &SweepArgs, config: &Config) -> Result<(String, Vec<f64>), CliError> {
    let from_section = config.sweep.as_ref();
    let parameter = args
        .param
        .clone()
        .or_else(|| from_section.map(|s| s.parameter.clone()))
        .ok_or_else(|| {
            CliError::config("sweep needs --param or a [sweep] config section".to_string())
        })?;
    let values = args
        .values
        .clone()
        .or_else(|| from_section.map(|s| s.values.clone()))
        .ok_or_else(|| {
            CliError::config("sweep needs --values or a [sweep] config section".to_string())
        })?;
    Ok((parameter, values))
}
