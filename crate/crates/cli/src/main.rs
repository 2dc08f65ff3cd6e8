//! `memchan`: reproducible experiments over erasure channels with shared
//! classical memory.
//!
//! Exit codes: 0 success, 1 claim failure or inconclusive estimate,
//! 2 configuration error, 3 I/O error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, ReportFormat};

#[derive(Parser)]
#[command(
    name = "memchan",
    version,
    about = "Memory-channel ratchet simulator and analysis toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config file (JSON); defaults to the reference setup.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base seed for the experiment.
    #[arg(long)]
    seed: Option<u64>,
    /// Trajectories per ensemble (N).
    #[arg(long)]
    trials: Option<u64>,
    /// Channel uses per trajectory (n).
    #[arg(long)]
    uses: Option<u64>,
    /// Threshold for the gated channels (roles b and c).
    #[arg(long)]
    m0: Option<i64>,
    /// Mixing weight of role c.
    #[arg(long)]
    lambda: Option<f64>,
    /// Directory for report artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum)]
    format: Option<ReportFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic residue-chain table: occupancy, success probability, drift.
    Stationary(CommonArgs),
    /// Run the three ensembles; write stats JSON and optional trajectory CSV.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        /// Record every trajectory and dump them as CSV (requires --out).
        #[arg(long)]
        record: bool,
    },
    /// Drift-reversal verdict over the three roles.
    Parrondo(CommonArgs),
    /// Effective-channel capacity report for the three roles.
    Capacity(CommonArgs),
    /// Recompute the published reference values and check the simulator
    /// against them.
    Reproduce(CommonArgs),
}

fn load_config(args: &CommonArgs) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(uses) = args.uses {
        config.uses = uses;
    }
    if let Some(m0) = args.m0 {
        config.channel_b.m0 = m0;
        config.channel_c.m0 = m0;
    }
    if let Some(lambda) = args.lambda {
        config.channel_c.lambda = lambda;
    }
    if let Some(out) = &args.out {
        config.out_dir = Some(out.clone());
    }
    if let Some(format) = args.format {
        config.format = format;
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match &cli.command {
        Command::Stationary(args) => {
            let config = load_config(args)?;
            commands::cmd_stationary(&config, config.format, config.out_dir.as_deref())
        }
        Command::Simulate { common, record } => {
            let config = load_config(common)?;
            commands::cmd_simulate(&config, *record, config.out_dir.as_deref())
        }
        Command::Parrondo(args) => {
            let config = load_config(args)?;
            commands::cmd_parrondo(&config, config.format, config.out_dir.as_deref())
        }
        Command::Capacity(args) => {
            let config = load_config(args)?;
            commands::cmd_capacity(&config, config.format, config.out_dir.as_deref())
        }
        Command::Reproduce(args) => {
            let config = load_config(args)?;
            commands::cmd_reproduce(&config, config.format, config.out_dir.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<std::io::Error>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
