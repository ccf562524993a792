//! `eigenbound`: eigenvalue inclusion radii for matrix polynomials.
//!
//! Exit codes: 0 ok, 1 internal error, 2 bad input or flags, 3 singular
//! leading coefficient, 4 inclusion violation.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigenbound::bounds::BoundError;
use eigenbound::harness::HarnessError;
use eigenbound::{FileError, HolderPair, NormKind, OracleError, Theorem, Variant};

#[derive(Parser, Debug)]
#[command(name = "eigenbound", version, about = "Eigenvalue inclusion radii for matrix polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every inclusion radius for a polynomial file.
    Bounds {
        input: PathBuf,
        #[command(flatten)]
        bounds: BoundFlags,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the eigenvalues with their residual certificates.
    Eigs {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check every bound against the computed spectrum.
    Check {
        input: PathBuf,
        #[command(flatten)]
        bounds: BoundFlags,
        /// Treat misses by the as-stated T1/T4 readings as violations.
        #[arg(long)]
        strict_as_stated: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the inclusion check over a seeded random ensemble.
    Random {
        #[command(flatten)]
        ensemble: EnsembleFlags,
        #[command(flatten)]
        bounds: BoundFlags,
        /// Directory receiving `report.json` and one file per violation.
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long)]
        strict_as_stated: bool,
        /// Disable the parallel sample loop.
        #[arg(long)]
        sequential: bool,
    },
    /// Emit disks and eigenvalue points as CSV.
    Plotdata {
        input: PathBuf,
        #[command(flatten)]
        bounds: BoundFlags,
        /// Keep only disks of this theorem (b, c, t1, ..., t4).
        #[arg(long)]
        theorem: Option<String>,
    },
}

#[derive(Args, Debug, Clone)]
struct BoundFlags {
    /// Comma-separated induced norms: 1, 2, inf.
    #[arg(long, default_value = "inf")]
    norm: String,
    /// Comma-separated Hölder exponents p > 1 (`inf` allowed).
    #[arg(long, default_value = "2,4,16")]
    p: String,
    #[arg(long, value_enum, default_value_t = VariantFlag::Corrected)]
    variant: VariantFlag,
    /// Norm below which a coefficient counts as zero when detecting gaps.
    #[arg(long, default_value_t = 0.0)]
    zero_tol: f64,
}

#[derive(Args, Debug, Clone)]
struct EnsembleFlags {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Matrix dimension, `k` or an inclusive range `lo..hi`.
    #[arg(long, default_value = "1..4")]
    n: String,
    /// Degree, `k` or an inclusive range `lo..hi`.
    #[arg(long, default_value = "1..5")]
    m: String,
    /// complex-gaussian, uniform-disk or integer-small.
    #[arg(long, default_value = "complex-gaussian")]
    distribution: String,
    /// general, commuting or diagonal.
    #[arg(long, default_value = "general")]
    structure: String,
    /// Zero out a random run of coefficients below the leading one.
    #[arg(long)]
    lacunary: bool,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VariantFlag {
    AsStated,
    Corrected,
    Both,
}

impl VariantFlag {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantFlag::AsStated => vec![Variant::AsStated],
            VariantFlag::Corrected => vec![Variant::CommutatorCorrected],
            VariantFlag::Both => vec![Variant::CommutatorCorrected, Variant::AsStated],
        }
    }
}

#[derive(Debug)]
enum CliError {
    Internal(String),
    Input(String),
    SingularLeading(String),
    Violation,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Input(_) => 2,
            CliError::SingularLeading(_) => 3,
            CliError::Violation => 4,
        }
    }

    fn singular(detail: impl std::fmt::Display) -> Self {
        CliError::SingularLeading(format!(
            "leading coefficient A_m is singular ({detail}); every bound here assumes \
             A_m and A_0 are nonsingular"
        ))
    }
}

impl From<FileError> for CliError {
    fn from(e: FileError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::SingularLeading(inner) => CliError::singular(inner),
            BoundError::InvalidDegree(_) | BoundError::InvalidHolder(_) | BoundError::InvalidGap { .. } => {
                CliError::Input(e.to_string())
            }
            BoundError::Degenerate(_) | BoundError::Root(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SingularLeading(inner) => CliError::singular(inner),
            OracleError::InvalidDegree(_) => CliError::Input(e.to_string()),
            OracleError::NoConvergence { .. } => CliError::Internal(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::InvalidConfig(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

struct BoundSettings {
    norms: Vec<NormKind>,
    p_grid: Vec<HolderPair>,
    variants: Vec<Variant>,
    zero_tol: f64,
}

impl BoundFlags {
    fn resolve(&self) -> Result<BoundSettings, CliError> {
        let norms = split_list(&self.norm)
            .map(|s| NormKind::parse(s).ok_or_else(|| CliError::Input(format!("unknown norm `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let p_grid = split_list(&self.p)
            .map(|s| {
                let p = if s.eq_ignore_ascii_case("inf") {
                    f64::INFINITY
                } else {
                    s.parse::<f64>().map_err(|_| CliError::Input(format!("bad Hölder exponent `{s}`")))?
                };
                HolderPair::new(p).map_err(CliError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        if norms.is_empty() {
            return Err(CliError::Input("--norm needs at least one norm".into()));
        }
        if !(self.zero_tol >= 0.0 && self.zero_tol.is_finite()) {
            return Err(CliError::Input(format!("--zero-tol must be a finite non-negative number, got {}", self.zero_tol)));
        }
        Ok(BoundSettings { norms, p_grid, variants: self.variant.variants(), zero_tol: self.zero_tol })
    }
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

fn parse_range(flag: &str, s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Input(format!("--{flag}: expected `k` or `lo..hi`, got `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    match s.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?, num(hi.trim_start_matches('='))?)),
        None => {
            let k = num(s)?;
            Ok((k, k))
        }
    }
}

fn parse_theorem_filter(s: Option<&str>) -> Result<Option<Theorem>, CliError> {
    s.map(|t| Theorem::parse(t).ok_or_else(|| CliError::Input(format!("unknown theorem `{t}`"))))
        .transpose()
}

/// `EIGENBOUND_TOL`, falling back to the library default.
fn inclusion_tolerance() -> Result<f64, CliError> {
    match std::env::var("EIGENBOUND_TOL") {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(t),
            _ => Err(CliError::Input(format!("EIGENBOUND_TOL must be a non-negative number, got `{v}`"))),
        },
        Err(_) => Ok(eigenbound::harness::DEFAULT_TOLERANCE),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Bounds { input, bounds, format } => {
            commands::bounds(&input, &bounds.resolve()?, format == Format::Json)
        }
        Command::Eigs { input, format } => commands::eigs(&input, format == Format::Json),
        Command::Check { input, bounds, strict_as_stated, format } => {
            let mut settings = bounds.resolve()?;
            if !settings.variants.contains(&Variant::AsStated) {
                settings.variants.push(Variant::AsStated);
            }
            commands::check(&input, &settings, strict_as_stated, inclusion_tolerance()?, format == Format::Json)
        }
        Command::Random { ensemble, bounds, out_dir, strict_as_stated, sequential } => {
            commands::random(&ensemble, &bounds.resolve()?, &out_dir, strict_as_stated, sequential, inclusion_tolerance()?)
        }
        Command::Plotdata { input, bounds, theorem } => {
            commands::plotdata(&input, &bounds.resolve()?, parse_theorem_filter(theorem.as_deref())?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Internal(msg) => eprintln!("error: internal: {msg}"),
                CliError::Input(msg) | CliError::SingularLeading(msg) => eprintln!("error: {msg}"),
                CliError::Violation => eprintln!("error: inclusion violation"),
            }
            ExitCode::from(e.code())
        }
    }
}
