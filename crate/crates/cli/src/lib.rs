//! Reproducible demonstrations over the `ucg-core` models, emitted as text,
//! JSON or CSV reports.

mod demos;
pub mod report;

use std::fmt;

use clap::{Parser, ValueEnum};
use ucg_core::algebra::group::group_order;
use ucg_core::Tolerances;

pub use report::{Check, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    DemoMatrix,
    DemoCommutative,
    DemoCompacts,
    FellConverge,
    MetricTable,
    PrimClosure,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::DemoMatrix => "demo-matrix",
            Command::DemoCommutative => "demo-commutative",
            Command::DemoCompacts => "demo-compacts",
            Command::FellConverge => "fell-converge",
            Command::MetricTable => "metric-table",
            Command::PrimClosure => "prim-closure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Raw command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "ucg", version, about = "Unitary conjugation groupoid demonstrations")]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Command,
    /// Matrix size for `M_n`.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Number of points for `ℂ^k`.
    #[arg(long = "k")]
    pub k: Option<usize>,
    /// Compact-part dimension for the truncated compacts.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    /// Root-of-unity order of the phase-permutation group.
    #[arg(long = "r")]
    pub r: Option<u32>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "tol-eq")]
    pub tol_eq: Option<f64>,
    #[arg(long = "tol-rank")]
    pub tol_rank: Option<f64>,
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

pub const MAX_N: usize = 6;
pub const MAX_K: usize = 8;
pub const MAX_BIG_N: usize = 8;
pub const MAX_R: u32 = 8;
pub const MAX_SAMPLES: usize = 10_000;
/// Largest phase-permutation group the matrix demo builds.
pub const MAX_GROUP: u128 = 2_000;

/// Validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub k: usize,
    pub big_n: usize,
    pub r: u32,
    pub samples: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub output_path: Option<std::path::PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "usage error: {}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn in_range<T: PartialOrd + fmt::Display>(name: &str, v: T, lo: T, hi: T) -> Result<T, UsageError> {
    if v < lo || v > hi {
        return Err(UsageError(format!("--{name} {v} outside {lo}..={hi}")));
    }
    Ok(v)
}

impl RunConfig {
    pub fn from_args(args: &Args) -> Result<Self, UsageError> {
        let default_samples = if args.command == Command::FellConverge { 20 } else { 64 };
        let n = in_range("n", args.n.unwrap_or(2), 1, MAX_N)?;
        let r = in_range("r", args.r.unwrap_or(2), 1, MAX_R)?;
        if args.command == Command::DemoMatrix && group_order(n, r) > MAX_GROUP {
            return Err(UsageError(format!("group of order {} for n = {n}, r = {r} exceeds {MAX_GROUP}", group_order(n, r))));
        }
        let mut tolerances = Tolerances::default();
        if let Some(eq) = args.tol_eq {
            tolerances.tau_eq = eq;
        }
        if let Some(rank) = args.tol_rank {
            tolerances.tau_rank = rank;
        }
        tolerances.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(Self {
            command: args.command,
            n,
            k: in_range("k", args.k.unwrap_or(3), 1, MAX_K)?,
            big_n: in_range("N", args.big_n.unwrap_or(4), 1, MAX_BIG_N)?,
            r,
            samples: in_range("samples", args.samples.unwrap_or(default_samples), 1, MAX_SAMPLES)?,
            seed: args.seed,
            tolerances,
            output_path: args.out.clone(),
            format: args.format,
        })
    }

    pub fn parse_from<I, S>(argv: I) -> Result<Self, UsageError>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let args = Args::try_parse_from(argv).map_err(|e| UsageError(e.to_string()))?;
        Self::from_args(&args)
    }
}

/// Runs the configured command. Failures inside the core surface as failed
/// checks, so the report is always produced.
pub fn run(config: &RunConfig) -> Report {
    let mut report = Report::new(config.command.name());
    report.param("seed", config.seed);
    report.param("samples", config.samples);
    report.param("tol_eq", report::num(config.tolerances.tau_eq));
    report.param("tol_rank", report::num(config.tolerances.tau_rank));
    match config.command {
        Command::DemoMatrix => demos::matrix(config, &mut report),
        Command::DemoCommutative => demos::commutative(config, &mut report),
        Command::DemoCompacts => demos::compacts(config, &mut report),
        Command::FellConverge => demos::fell(config, &mut report),
        Command::MetricTable => demos::metric_table(config, &mut report),
        Command::PrimClosure => demos::prim_closure(config, &mut report),
    }
    report
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    }
}

/// 0 when every check passes, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.passed() {
        0
    } else {
        1
    }
}
