//! Library half of the `gmdisc` binary: argument definitions, input
//! parsing and the subcommands themselves, kept here so they can be driven
//! from tests without spawning a process.

pub mod commands;
pub mod config;
pub mod literal;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gmdisc::exactnum::{NumError, DEFAULT_MAX_PRECISION};
use gmdisc::gmengine::EngineError;
use gmdisc::hypgeo::GeoError;
use gmdisc::moebius::MoebiusError;
use gmdisc::semialg::SaError;
use thiserror::Error;

pub use commands::{execute, Outcome};
pub use config::{OutputFormat, RunConfig};

/// Process exit status for a certified answer.
pub const EXIT_CERTIFIED: u8 = 0;
/// Unresolved verdict or an undecided sign.
pub const EXIT_UNRESOLVED: u8 = 1;
pub const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Matrix(#[from] MoebiusError),
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Domain(#[from] SaError),
    #[error(transparent)]
    Geometry(#[from] GeoError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// Stable machine-readable code printed before the message.
    pub fn code(&self) -> &'static str {
        fn num(e: &NumError) -> &'static str {
            match e {
                NumError::BackendMismatch(..) | NumError::FieldMismatch => "backend-mismatch",
                NumError::InvalidField(_) => "field",
                NumError::Indeterminate { .. } => "indeterminate",
                NumError::DivisionByZero => "division-by-zero",
                _ => "numeric",
            }
        }
        fn moebius(e: &MoebiusError) -> &'static str {
            match e {
                MoebiusError::Determinant(_) => "determinant",
                MoebiusError::Identity => "identity-generator",
                MoebiusError::Num(n) => num(n),
                _ => "matrix",
            }
        }
        match self {
            CliError::Parse(_) => "parse",
            CliError::Matrix(e) => moebius(e),
            CliError::Num(e) => num(e),
            CliError::Engine(e) => match e {
                EngineError::IdentityGenerator(_) => "identity-generator",
                EngineError::BackendMismatch(..) => "backend-mismatch",
                EngineError::Num(n) => num(n),
                EngineError::Moebius(m) => moebius(m),
                EngineError::Elementary => "elementary",
            },
            CliError::Domain(e) => match e {
                SaError::DimensionMismatch { .. } => "dimension",
                SaError::OracleScalar => "backend-mismatch",
                SaError::Num(n) => num(n),
                _ => "domain-parse",
            },
            CliError::Geometry(e) => match e {
                GeoError::Num(n) => num(n),
                GeoError::Moebius(m) => moebius(m),
                _ => "geometry",
            },
            CliError::Io { .. } => "io",
            CliError::Config(_) => "config",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gmdisc", version, about = "Decide discreteness of two-generator subgroups of PSL(2,R)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalArgs {
    /// Number model: rational, algebraic or interval.
    #[arg(long, env = "GMDISC_BACKEND", default_value = "rational", global = true)]
    pub backend: String,
    /// Precision ceiling for the interval backend and bit-demo (at least 8).
    #[arg(long, env = "GMDISC_MAX_PRECISION", default_value_t = DEFAULT_MAX_PRECISION, global = true)]
    pub max_precision: u32,
    /// Number field for the algebraic backend, e.g. "x^2 - 2 in [1, 2]".
    /// Its generator is written `g` in matrix entries.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify one matrix by its trace.
    Classify {
        /// Matrix literal `[[a,b],[c,d]]`.
        matrix: String,
    },
    /// Run the reduction on a generator pair.
    RunGm(RunArgs),
    /// Show how a sign is (or is not) certified from precision queries.
    BitDemo {
        /// A rational expression such as `2^-5`, or `sqrt2` / `wobbling-zero`.
        #[arg(allow_hyphen_values = true)]
        value: String,
    },
    /// Test a point against a domain file.
    SaMember {
        domain: PathBuf,
        /// One coordinate per domain variable.
        #[arg(required = true, allow_hyphen_values = true)]
        point: Vec<String>,
    },
    /// Draw the axes of A, B and AB⁻¹ as SVG.
    Render {
        a: String,
        b: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Clone)]
pub struct RunArgs {
    /// First generator (omit with --batch).
    #[arg(required_unless_present = "batch")]
    pub a: Option<String>,
    #[arg(required_unless_present = "batch")]
    pub b: Option<String>,
    /// Step budget is ceil(c·T) for this c (at least 1).
    #[arg(long, default_value_t = gmdisc::gmengine::DEFAULT_BUDGET_CONSTANT)]
    pub budget_constant: u32,
    /// Fixed step budget, overriding --budget-constant.
    #[arg(long)]
    pub max_steps: Option<u64>,
    /// Write one SVG per visited pair into this directory.
    #[arg(long)]
    pub render_dir: Option<PathBuf>,
    /// File of pairs, one per line: `name | A | B` or `A B`.
    #[arg(long, conflicts_with_all = ["a", "b"])]
    pub batch: Option<PathBuf>,
}
