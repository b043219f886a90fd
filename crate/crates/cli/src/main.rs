//! `tar1`: simulate TAR(1) paths, run Monte Carlo experiments against limit
//! laws, and apply the threshold unit-root test.
//!
//! Exit codes: 0 success (including statistically inconclusive results),
//! 2 configuration error, 3 numeric guard, 1 anything else.

mod commands;
mod config;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Other(anyhow::Error),
}


impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric guard: {m}"),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Other(e)
    }
}

impl From<tar1_core::Error> for CliError {
    fn from(e: tar1_core::Error) -> Self {
        use tar1_core::Error as E;
        match e {
            E::Overflow { .. } | E::DivisionGuard(_) => CliError::Numeric(e.to_string()),
            E::InvalidParameter { .. } | E::HorizonTooShort { .. } | E::ConstructionMismatch { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Other(other.into()),
        }
    }
}

impl From<tar1_core::io::IoError> for CliError {
    fn from(e: tar1_core::io::IoError) -> Self {
        CliError::Other(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(name = "tar1", version, about = "Non-stationary TAR(1) simulation and limit-law toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one path from the [model], [noise] and [simulate] sections.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the [experiment] section and compare against [limit_law].
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw the [limit_law] sample on its own.
    SampleLimit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the regime classification of the [model] section.
    Classify {
        #[arg(long)]
        config: PathBuf,
    },
    /// Least-squares slopes of a series read from CSV.
    Estimate {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
    },
    /// Left-tailed unit-root test of a series read from CSV.
    UnitRootTest {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[arg(long, default_value_t = 0.05)]
        level: f64,
        /// Quantile table to use instead of the shipped one.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Regenerate the Brownian-functional quantile table.
    DfTable {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = tar1_core::unit_root::DEFAULT_GENERATOR.m)]
        m: usize,
        #[arg(long, default_value_t = tar1_core::unit_root::DEFAULT_GENERATOR.draws)]
        draws: usize,
        #[arg(long, default_value_t = tar1_core::unit_root::DEFAULT_GENERATOR.seed)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate { config, out } => commands::simulate(&config, &out),
        Command::Experiment { config, out } => commands::experiment(&config, &out),
        Command::SampleLimit { config, out } => commands::sample_limit(&config, &out),
        Command::Classify { config } => commands::classify(&config),
        Command::Estimate { series, r, gamma } => commands::estimate(&series, r, gamma),
        Command::UnitRootTest {
            series,
            r,
            level,
            table,
        } => commands::unit_root_test(&series, r, level, table.as_deref()),
        Command::DfTable { out, m, draws, seed } => commands::df_table(&out, m, draws, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tar1: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
