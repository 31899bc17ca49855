//! Argument parsing and dispatch for the `polar-ed` command line.
//!
//! [`dispatch`] never prints or exits; it returns a [`CommandResult`] so the
//! binary and the tests share one code path.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use output::CommandResult;

/// Default tolerance for the floating-point commands.
pub const DEFAULT_TOL: f64 = 1e-8;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<polar_ed::rep::RepIoError> for CliError {
    fn from(e: polar_ed::rep::RepIoError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<polar_ed::catalog::CatalogError> for CliError {
    fn from(e: polar_ed::catalog::CatalogError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<polar_ed::polarity::PolarityError> for CliError {
    fn from(e: polar_ed::polarity::PolarityError) -> Self {
        use polar_ed::polarity::PolarityError::*;
        match e {
            Degenerate { .. } | Inconclusive { .. } | DegenerateVector { .. } => CliError::Numeric(e.to_string()),
            NoTrials | Length { .. } | Slice(_) => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<polar_ed::transfer::TransferError> for CliError {
    fn from(e: polar_ed::transfer::TransferError) -> Self {
        match e {
            polar_ed::transfer::TransferError::NumericFailure(_) => CliError::Numeric(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "polar-ed",
    version,
    about = "Polarity tests for orthogonal representations and ED critical points of invariant matrix varieties"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Base seed for randomized checks.
    #[arg(long, global = true, default_value_t = polar_ed::polarity::DEFAULT_SEED)]
    pub seed: u64,
    /// Number of random samples that must agree.
    #[arg(long, global = true, default_value_t = polar_ed::polarity::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Relative tolerance for floating-point checks.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Write the primary artifact to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in representation families.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Polarity tests and slices.
    #[command(subcommand)]
    Polarity(PolarityCmd),
    /// Nearest point on a variety.
    #[command(subcommand)]
    Nearest(TransferCmd),
    /// ED critical points.
    #[command(subcommand)]
    Critical(CriticalCmd),
    /// ED degrees.
    #[command(subcommand)]
    Eddeg(EddegCmd),
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// List the families with their parameter ranges.
    List,
    /// Build one family and emit its representation file.
    Export {
        family: String,
        params: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Polar,
    NotPolar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Kernel,
    Dense,
}

#[derive(Debug, Subcommand)]
pub enum PolarityCmd {
    /// Decide polarity of a representation file.
    Test {
        rep: PathBuf,
        /// Exit with code 4 unless the verdict matches.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        /// Membership computation.
        #[arg(long, value_enum, default_value = "kernel")]
        route: Route,
    },
    /// Extract a slice at a random generic point.
    Slice { rep: PathBuf },
    /// Check a claimed slice, from `--slice` or the representation file.
    Verify {
        rep: PathBuf,
        #[arg(long)]
        slice: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Symmetric data matrix as a JSON array of rows.
    #[arg(long)]
    pub data: PathBuf,
    /// Prescribed eigenvalues, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub lambda: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct SingularArgs {
    /// Data matrix as a JSON array of rows.
    #[arg(long)]
    pub data: PathBuf,
    /// Prescribed singular values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sigma: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum TransferCmd {
    /// Nearest symmetric matrix with the given eigenvalues.
    Spectrum(SpectrumArgs),
    /// Nearest matrix with the given singular values.
    Singular(SingularArgs),
}

#[derive(Debug, Subcommand)]
pub enum CriticalCmd {
    /// Enumerate all critical points.
    #[command(subcommand)]
    Enumerate(TransferCmd),
}

#[derive(Debug, Subcommand)]
pub enum EddegCmd {
    /// Multinomial count for an eigenvalue list.
    Spectrum {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambda: Vec<f64>,
    },
    /// Count for a regular adjoint orbit of sl_n.
    Adjoint {
        #[arg(long)]
        n: usize,
    },
}

/// Parses `argv` (including the program name) and runs the command.
pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandResult::text(EXIT_OK, text, String::new()),
                _ => CommandResult::text(EXIT_INVALID, String::new(), text),
            };
        }
    };
    commands::run(&cli)
}
