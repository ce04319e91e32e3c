//! `twotier`: command-line front end for two-tier voting experiments.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Outcome;
use crate::config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] twotier::Error),
    #[error("{0}")]
    Io(String),
}

#[derive(Parser)]
#[command(name = "twotier", version, about = "Two-tier weighted voting experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shapley-Shubik and Banzhaf indices of a weighted voting game.
    Shapley {
        /// Game file: quota fraction, then weights.
        game: Option<PathBuf>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Estimate pivot probabilities and per-capita influence.
    Simulate(Flags),
    /// Search the power-law exponent minimizing influence inequality.
    OptimizeAlpha(Flags),
    /// Run the statistical verification suite.
    Verify {
        /// Multiplies every model allowance (0 gives a negative control).
        #[arg(long)]
        tolerance_scale: Option<f64>,
        #[command(flatten)]
        flags: Flags,
    },
    /// Find integer weights whose Shapley value matches a target.
    Inverse(Flags),
}

#[derive(Args, Default)]
struct Flags {
    /// Flat TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replications: Option<u64>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exponent grid as start:end:step.
    #[arg(long)]
    alpha_grid: Option<String>,
    #[arg(long)]
    quota: Option<f64>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        config.seed = self.seed.or(config.seed);
        config.replications = self.replications.or(config.replications);
        config.out = self.out.clone().or(config.out);
        config.alpha_grid = self.alpha_grid.clone().or(config.alpha_grid);
        config.quota = self.quota.or(config.quota);
        if let Some(threads) = self.threads {
            if threads == 0 {
                return Err(CliError::Invalid("--threads must be at least 1".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Shapley { game, flags } => {
            let mut config = flags.resolve()?;
            config.game = game.or(config.game);
            commands::shapley(&mut config)
        }
        Command::Simulate(flags) => commands::simulate(&mut flags.resolve()?),
        Command::OptimizeAlpha(flags) => commands::optimize(&mut flags.resolve()?),
        Command::Verify { tolerance_scale, flags } => {
            let mut config = flags.resolve()?;
            config.tolerance_scale = tolerance_scale.or(config.tolerance_scale);
            commands::verify(&mut config)
        }
        Command::Inverse(flags) => commands::inverse(&mut flags.resolve()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
