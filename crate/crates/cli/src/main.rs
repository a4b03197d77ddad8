use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rrho_cli::commands::{self, Estimator};
use rrho_cli::config::{self, ScenarioFile, SweepSpec};
use rrho_cli::output::{emit, RunManifest};
use rrho_cli::CliError;
use rrho_core::montecarlo::DEFAULT_TRIALS;
use rrho_core::protocol::HoMode;
use rrho_core::scenario::ServerKind;

#[derive(Parser)]
#[command(name = "rrho", version, about = "RIS reconfiguration and handover rate models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Rr,
    Ho,
    Rism,
    Sgw,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    X2,
    S1,
}

impl From<Mode> for HoMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::X2 => HoMode::X2,
            Mode::S1 => HoMode::S1,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form probabilities and rates for one scenario.
    Analytic {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo estimates for one scenario.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// rr or ho; both when omitted.
        #[arg(long, value_enum)]
        kind: Option<Kind>,
    },
    /// Evaluate outputs over a range of one variable.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
    },
    /// Smallest server count that keeps each server under a threshold.
    Dimension {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Messages per unit time one server can take.
        #[arg(long)]
        threshold: f64,
        #[arg(long, value_enum, default_value = "rism")]
        kind: Kind,
    },
    /// Print a signaling sequence, or simulate the message load of a scenario.
    Protocol {
        #[arg(long, value_enum, default_value = "rr")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "x2")]
        mode: Mode,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e4)]
        duration: f64,
    },
}

fn estimator(kind: Kind) -> Result<Estimator, CliError> {
    match kind {
        Kind::Rr => Ok(Estimator::Rr),
        Kind::Ho => Ok(Estimator::Ho),
        _ => Err(CliError::validation("kind: expected rr or ho")),
    }
}

fn server_kind(kind: Kind) -> Result<ServerKind, CliError> {
    match kind {
        Kind::Rism => Ok(ServerKind::RisM),
        Kind::Sgw => Ok(ServerKind::Sgw),
        _ => Err(CliError::validation("kind: expected rism or sgw")),
    }
}

fn load_scenario(path: &Path) -> Result<(config::Scenario, String), CliError> {
    let loaded = config::load::<ScenarioFile>(path)?;
    Ok((loaded.value.to_scenario()?, config::digest(&loaded.bytes)))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic { config, out } => {
            let (scenario, digest) = load_scenario(&config)?;
            let table = commands::analytic(&scenario)?;
            emit(&table.to_csv()?, out.as_deref(), &RunManifest::new("analytic", Some(digest), None))
        }
        Command::Simulate { config, out, seed, trials, kind } => {
            let which = kind.map(estimator).transpose()?;
            let (scenario, digest) = load_scenario(&config)?;
            let table = commands::simulate(&scenario, which, trials, seed)?;
            emit(&table.to_csv()?, out.as_deref(), &RunManifest::new("simulate", Some(digest), Some(seed)))
        }
        Command::Sweep { config, out, seed, trials } => {
            let loaded = config::load::<SweepSpec>(&config)?;
            loaded.value.validate()?;
            let table = commands::sweep(&loaded.value, trials, seed)?;
            let manifest = RunManifest::new("sweep", Some(config::digest(&loaded.bytes)), Some(seed));
            emit(&table.to_csv()?, out.as_deref(), &manifest)
        }
        Command::Dimension { config, out, threshold, kind } => {
            let kind = server_kind(kind)?;
            if !(threshold > 0.0 && threshold.is_finite()) {
                return Err(CliError::validation(format!("threshold: {threshold} must be positive")));
            }
            let (scenario, digest) = load_scenario(&config)?;
            let table = commands::dimension(&scenario, threshold, kind)?;
            emit(&table.to_csv()?, out.as_deref(), &RunManifest::new("dimension", Some(digest), None))
        }
        Command::Protocol { kind, mode, config, out, seed, duration } => match config {
            None => {
                let text = commands::protocol_trace(estimator(kind)?, mode.into());
                emit(&text, out.as_deref(), &RunManifest::new("protocol", None, None))
            }
            Some(config) => {
                let (scenario, digest) = load_scenario(&config)?;
                let table = commands::protocol_load(&scenario, duration, mode.into(), seed)?;
                emit(&table.to_csv()?, out.as_deref(), &RunManifest::new("protocol", Some(digest), Some(seed)))
            }
        },
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rrho: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
