//! Command-line front end: argument parsing, config merging and the four
//! commands. `main` only maps the outcome to an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use diskmodes::config::{ConfigError, RunConfig, Suite};
use diskmodes::spectrum::Boundary;

mod commands;

pub use commands::{charges, evolve, spectrum, verify, ChargeReport, EvolveSummary};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: diskmodes::Error,
    },
    #[error(transparent)]
    Library(#[from] diskmodes::Error),
    #[error("{0}")]
    Usage(String),
    /// The report goes to stdout unless `--out` already received it.
    #[error("verification failed: {failed} check(s) did not pass")]
    VerifyFailed { failed: usize, report: Output },
}

impl CliError {
    /// 1 for failed verification, 2 for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed { .. } => 1,
            _ => 2,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Library(e.into())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "diskmodes",
    version,
    about = "Normal modes and conserved charges of a scalar field on a disk"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root table: x, k, omega and normalization per mode.
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Also write the table as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Field snapshots of a state; `--out` names a directory that receives
    /// trajectory.csv, final_state.json and summary.json.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        /// State JSON; a seeded random state when omitted.
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
        /// Snapshot times, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        times: Option<Vec<f64>>,
    },
    /// Invariant suites; exits with 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum)]
        suite: Option<SuiteArg>,
    },
    /// Bilocal charge of a state by double quadrature and in mode form.
    Charges {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_name = "PATH")]
        state: PathBuf,
        #[arg(long, value_name = "PATH")]
        coefficients: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteArg {
    Spectrum,
    Basis,
    Field,
    Symmetry,
    Fock,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Spectrum => Suite::Spectrum,
            SuiteArg::Basis => Suite::Basis,
            SuiteArg::Field => Suite::Field,
            SuiteArg::Symmetry => Suite::Symmetry,
            SuiteArg::Fock => Suite::Fock,
            SuiteArg::All => Suite::All,
        }
    }
}

/// Flags shared by every command. Each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Robin parameter: the edge condition is dφ/dr = (λ/R) φ.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "dirichlet")]
    pub lambda: Option<f64>,
    /// φ = 0 at the edge.
    #[arg(long)]
    pub dirichlet: bool,
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long)]
    pub nmax: Option<u32>,
    #[arg(long = "grid-r")]
    pub grid_r: Option<usize>,
    #[arg(long = "grid-theta")]
    pub grid_theta: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file (directory for `evolve`); stdout when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

impl CommonArgs {
    /// Config file (or defaults) with the flags laid over it.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_json(&read(path)?).map_err(|e| CliError::Input {
                path: path.clone(),
                source: e.into(),
            })?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.radius {
            cfg.radius = v;
        }
        if let Some(v) = self.mass {
            cfg.mass = v;
        }
        if let Some(lambda) = self.lambda {
            cfg.boundary = Boundary::Robin { lambda };
        }
        if self.dirichlet {
            cfg.boundary = Boundary::Dirichlet;
        }
        if let Some(v) = self.lmax {
            cfg.l_max = v;
        }
        if let Some(v) = self.nmax {
            cfg.n_max = v;
        }
        if self.grid_r.is_some() {
            cfg.grid_r = self.grid_r;
        }
        if self.grid_theta.is_some() {
            cfg.grid_theta = self.grid_theta;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        Ok(cfg)
    }
}

/// What a command produced: text for stdout, if any.
pub type Output = Option<String>;

/// Writes `text` to the configured output file, or returns it for stdout.
pub(crate) fn emit(cfg: &RunConfig, text: String) -> Result<Output, CliError> {
    match &cfg.out {
        Some(path) => {
            write(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

pub fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Spectrum { common, csv } => spectrum(&common.resolve()?, csv.as_deref()),
        Command::Evolve {
            common,
            state,
            times,
        } => {
            let mut cfg = common.resolve()?;
            if let Some(times) = times {
                cfg.times = times;
            }
            evolve(&cfg, state.as_deref())
        }
        Command::Verify { common, suite } => {
            let mut cfg = common.resolve()?;
            if let Some(s) = suite {
                cfg.suite = s.into();
            }
            verify(&cfg)
        }
        Command::Charges {
            common,
            state,
            coefficients,
        } => charges(&common.resolve()?, &state, &coefficients),
    }
}
