//! Command-line front end for `fhgeom`.
//!
//! Exit codes: 0 success, 2 usage error (bad flags, bad domain spec, bad
//! `N` or `K`), 3 geometry error, 4 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fhgeom::{load_domain, ConvexBody, DomainSpec, GeomError, MetricKind};

mod commands;
pub mod report;

pub use report::{Report, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_GEOMETRY: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fhgeom",
    version,
    about = "Funk and Hilbert geometry on convex domains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distances d(x, y), d(y, x) and the symmetrization check.
    Dist(DistArgs),
    /// Weighted Ricci curvature at one tangent vector.
    Wricci(WricciArgs),
    /// Seeded sweep of the closed-form checks.
    Verify(VerifyArgs),
    /// Lebesgue volume of forward balls.
    Ballvol(BallvolArgs),
    /// Bishop-Gromov ratio monotonicity.
    Bgcheck(BgcheckArgs),
    /// Fundamental tensor by each available route.
    Tensor(TensorArgs),
    /// Ricci curvature at one tangent vector.
    Ricci(RicciArgs),
    /// Summary of a domain spec.
    DomainInfo(DomainInfoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Domain spec: a JSON file, or inline JSON. Defaults to the unit ball.
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "hilbert")]
    pub metric: MetricKind,
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
}

#[derive(Debug, Args)]
pub struct WricciArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "funk")]
    pub metric: MetricKind,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, allow_hyphen_values = true)]
    pub vector: String,
    /// Comma-separated effective dimensions; `inf` allowed.
    #[arg(long = "N")]
    pub big_n: Option<String>,
    /// Oracle deviation tolerance.
    #[arg(long, default_value_t = 2e-3)]
    pub tol: f64,
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Exit 4 when a deviation exceeds the tolerance.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Defaults to both funk and hilbert.
    #[arg(long)]
    pub metric: Option<MetricKind>,
    #[arg(long, default_value_t = 30)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Curvature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub fd_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BallvolArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "funk")]
    pub metric: MetricKind,
    #[arg(long, alias = "center", allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Comma-separated radii.
    #[arg(long = "r", alias = "r-grid", default_value = "1")]
    pub radii: String,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "monte_carlo")]
    pub method: String,
}

#[derive(Debug, Args)]
pub struct BgcheckArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "funk")]
    pub metric: MetricKind,
    #[arg(long, alias = "center", allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Effective dimension; defaults to n + 2.
    #[arg(long = "N")]
    pub big_n: Option<String>,
    /// Curvature bound; defaults to the value for the metric and N.
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(
        long = "r-grid",
        alias = "r",
        default_value = "0.25,0.5,0.75,1,1.25,1.5,1.75,2"
    )]
    pub radii: String,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit 4 when a violation is flagged.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "funk")]
    pub metric: MetricKind,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, allow_hyphen_values = true)]
    pub vector: String,
    #[arg(long)]
    pub fd_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct RicciArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "funk")]
    pub metric: MetricKind,
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, allow_hyphen_values = true)]
    pub vector: String,
    #[arg(long)]
    pub fd_step: Option<f64>,
    /// Bound on the Richardson discrepancy.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DomainInfoArgs {
    #[command(flatten)]
    pub common: Common,
    /// Boundary samples for the convexity margin.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Ways a command can end without a clean report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Geometry(GeomError),
}

impl From<GeomError> for Failure {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::BadSpec(_) | GeomError::BadN(_) | GeomError::BadK(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Geometry(other),
        }
    }
}

/// A finished report and whether its checks passed.
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` (or `--output`) and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let (common, result) = commands::dispatch(&cli.command);
    match result {
        Ok(outcome) => {
            let text = match common.format {
                Format::Json => outcome.report.to_json(),
                Format::Csv => outcome.report.to_csv(),
            };
            let written = match &common.output {
                Some(path) => fs::write(path, text).map_err(|e| e.to_string()),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write report: {e}");
                return EXIT_USAGE;
            }
            if outcome.passed {
                EXIT_OK
            } else {
                let _ = writeln!(err, "verification failed");
                EXIT_VERIFY
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Geometry(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_GEOMETRY
        }
    }
}

/// Comma-separated decimals.
pub fn parse_list(text: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|tok| {
            let tok = tok.trim();
            tok.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Failure::Usage(format!("cannot parse {tok:?} as a number")))
        })
        .collect()
}

/// Loads `--domain`, or the unit ball of dimension `dim` when absent.
pub fn load_body(common: &Common, dim: Option<usize>) -> Result<ConvexBody, Failure> {
    let spec = match &common.domain {
        Some(text) if text.trim_start().starts_with('{') => DomainSpec::from_json(text)?,
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {path}: {e}")))?;
            DomainSpec::from_json(&text)?
        }
        None => DomainSpec::unit_ball(dim.unwrap_or(2)),
    };
    let body = load_domain(&spec)?;
    if let Some(d) = dim {
        if d != body.dim() {
            return Err(Failure::Usage(format!(
                "expected {}-dimensional input for this domain, got {d}",
                body.dim()
            )));
        }
    }
    Ok(body)
}
