//! Command line front end for `splitcount`.
//!
//! [`run`] executes a parsed [`Cli`] inside the caller's rayon pool and
//! returns the rendered output; [`main_with_args`] adds the pool, file
//! output and exit codes.

mod commands;
mod parse;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use parse::{parse_poly, parse_split};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] splitcount::Error),
    /// A computed result failed one of its own checks.
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
}

impl CliError {
    /// 1 for invariant or domain failures, 2 for bad usage.
    pub fn exit_code(&self) -> i32 {
        use splitcount::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(..) => 2,
            CliError::Invariant(_) => 1,
            CliError::Core(e) => match e {
                E::InsufficientPoints(_)
                | E::Parse(_)
                | E::OddB(_)
                | E::DimensionMismatch(_)
                | E::InvalidInput(_)
                | E::NotPrime(_)
                | E::WorkLimitExceeded { .. } => 2,
                E::CharPolyMismatch { .. }
                | E::RankError { .. }
                | E::NotUnipotent(_)
                | E::DependentVectors
                | E::Internal(_) => 1,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser, Serialize)]
#[command(name = "splitcount", version, about = "Count and normalize integer matrices with characteristic polynomial (x-1)^a(x+1)^b")]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    #[serde(skip)]
    pub threads: usize,
    /// Largest predicted loop count run without --force.
    #[arg(long, global = true, default_value_t = splitcount::counting::DEFAULT_WORK_LIMIT)]
    pub work_limit: u128,
    /// Run even when the work estimate exceeds --work-limit.
    #[arg(long, global = true)]
    pub force: bool,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to the --out extension, else json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

/// `--poly`, `--split` and `--n` together.
#[derive(Debug, Clone, Args, Serialize)]
pub struct PolyArgs {
    /// Matrix dimension, checked against the polynomial.
    #[arg(long)]
    pub n: Option<usize>,
    /// Polynomial such as "(x+1)^2(x-1)".
    #[arg(long, conflicts_with = "split")]
    pub poly: Option<String>,
    /// Multiplicities "a,b" of the eigenvalues 1 and -1.
    #[arg(long)]
    pub split: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Brute,
    Param,
    Block,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormArg {
    Sup,
    #[value(alias = "frobenius")]
    Fro,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditKind {
    Coverage,
    Norms,
    Bands,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Count matrices of height at most H.
    Count {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        /// One or more heights, comma separated.
        #[arg(long, required = true, value_delimiter = ',')]
        height: Vec<u64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = NormArg::Sup)]
        norm: NormArg,
        /// Split brute-force counts by Jordan type.
        #[arg(long)]
        stratify: bool,
        /// Box constant of the parametrized sweeps.
        #[arg(long = "K", default_value_t = splitcount::counting::DEFAULT_K)]
        k: i64,
        /// Mixed sweep: use |b| <= H for every w instead of the refined range.
        #[arg(long)]
        crude_b: bool,
        /// Also conjugate by upper unipotents with entries in [-r, r].
        #[arg(long, default_value_t = 0)]
        compose_upper: i64,
    },
    /// Reduce a matrix to upper block form and normalize its Jordan blocks.
    Reduce {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
    },
    /// Jordan type of a matrix; unipotent input also gets a triangularizing conjugator.
    Jordan {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
    },
    /// Residue counts modulo p^k.
    Density {
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        /// One prime, or several with --table.
        #[arg(long = "prime", required = true, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Every k from 1 to --k, with stability deltas.
        #[arg(long)]
        table: bool,
        /// Also compare the solutions mod p^k with those mod p^(k-1).
        #[arg(long)]
        check_reduction: bool,
    },
    /// Log-log growth exponent of stored counts.
    Fit {
        /// JSON from `count`, or an array of count records.
        #[arg(long)]
        input: PathBuf,
    },
    /// Check the 3x3 closed forms against exact multiplication.
    VerifyConj {
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 50)]
        range: i64,
        /// Radius of the exhaustive box.
        #[arg(long = "box", default_value_t = 3)]
        box_radius: i64,
    },
    /// Coverage of the parametrized sweeps, norm sandwich, or band bounds.
    Audit {
        #[arg(long, value_enum, default_value_t = AuditKind::Coverage)]
        kind: AuditKind,
        #[command(flatten)]
        #[serde(flatten)]
        poly: PolyArgs,
        /// Heights; for the band audit, entry ranges of the random block forms.
        #[arg(long, value_delimiter = ',', default_values_t = [1u64])]
        height: Vec<u64>,
        /// Box constants to compare.
        #[arg(long = "K", value_delimiter = ',', default_values_t = [splitcount::counting::DEFAULT_K])]
        k: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        compose_upper: i64,
        /// Random samples for the band audit.
        #[arg(long, default_value_t = 200)]
        samples: u64,
    },
}

/// A finished command: the JSON document and, for tabular results, CSV.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
    /// Set when a computed result failed one of its own checks; the report
    /// is still written and the exit code is 1.
    pub violation: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("JSON values serialize") + "\n"),
            Format::Csv => self.csv.clone().ok_or_else(|| CliError::Usage("this subcommand has no CSV output".into())),
        }
    }
}

impl Cli {
    pub fn output_format(&self) -> Format {
        self.format.unwrap_or_else(|| match self.out.as_ref().and_then(|p| p.extension()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        })
    }

    pub fn guard(&self) -> splitcount::counting::WorkGuard {
        splitcount::counting::WorkGuard { limit: self.work_limit, force: self.force }
    }
}

/// Runs the command in the current rayon pool.
///
/// The JSON document has `tool`, `version`, `config`, `runtime` and
/// `result`. Only `runtime` and fields named `wall_seconds` vary between
/// identical runs.
pub fn run(cli: &Cli) -> CliResult<Report> {
    let start = Instant::now();
    let out = commands::dispatch(cli)?;
    let json = json!({
        "tool": "splitcount",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cli,
        "runtime": {
            "threads": rayon::current_num_threads(),
            "wall_seconds": start.elapsed().as_secs_f64(),
        },
        "result": out.result,
    });
    Ok(Report { json, csv: out.csv, violation: out.violation })
}

/// Runs `cli` in a fresh pool of `cli.threads` workers.
pub fn run_in_pool(cli: &Cli) -> CliResult<Report> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| run(cli))
}

/// Drops `runtime` and every `wall_seconds` key, for reproducibility checks.
pub fn strip_timing(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| k.as_str() != "runtime" && k.as_str() != "wall_seconds")
                .map(|(k, v)| (k.clone(), strip_timing(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(strip_timing).collect()),
        other => other.clone(),
    }
}

/// Full program: parse, run, write, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = run_in_pool(&cli).and_then(|report| {
        let text = report.render(cli.output_format())?;
        match &cli.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(path.display().to_string(), e))?,
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e))?,
        }
        report.violation.map_or(Ok(()), |msg| Err(CliError::Invariant(msg)))
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
