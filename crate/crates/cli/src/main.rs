//! `noiseless`: decompose decoupling groups, classify noiseless factors, and
//! run decoupling and encoded-gate experiments from a TOML config.

mod commands;
mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Run;
use config::Config;
use output::{Format, Writer};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] noiseless::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for invalid input, 3 for an unresolved degeneracy, 4 otherwise.
    pub fn exit_code(&self) -> u8 {
        use noiseless::Error as E;
        match self {
            Self::Config(_) => 2,
            Self::Core(E::Degeneracy { .. }) => 3,
            Self::Core(E::Parse(_) | E::Precondition(_) | E::Size(_) | E::GroupTooLarge { .. }) => {
                2
            }
            Self::Core(_) | Self::Io { .. } | Self::Runtime(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "noiseless",
    version,
    about = "Noiseless subsystems under bang-bang decoupling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment config (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for sweeps; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Block table and isometries of the group's decomposition.
    Decompose,
    /// Noiseless verdict for every factor under an error set.
    CheckNoiseless,
    /// Decoupling sweep over cycle times, or a faulty-pulse run.
    Simulate,
    /// Encoded circuit under the flip decoupler.
    Gates,
}

fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli
        .config
        .as_deref()
        .ok_or_else(|| CliError::Config("--config is required".into()))?;
    let mut cfg = Config::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    log::info!(
        "config {} (hash {}), seed {}",
        path.display(),
        cfg.hash(),
        cfg.seed
    );

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut out = Writer::new(&cli.out)?;
    let ctx = Run {
        cfg: &cfg,
        format: cli.format,
        pool: &pool,
        out: &mut out,
    };
    match cli.command {
        Command::Decompose => commands::decompose(ctx)?,
        Command::CheckNoiseless => commands::check_noiseless(ctx)?,
        Command::Simulate => commands::simulate(ctx)?,
        Command::Gates => commands::gates(ctx)?,
    }
    Ok(out.written)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
