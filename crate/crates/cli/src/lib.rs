//! Command-line front end for the `fiberfield` library.
//!
//! [`RunConfig`] describes one invocation; [`run`] executes it and returns
//! the exit status together with the rendered report.

mod report;

use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, ValueEnum};
use fiberfield::arith::FactorBudget;
use fiberfield::covers::{self, CoverSpec, FiberOptions};
use fiberfield::diversity::{EngineOptions, Method};
use fiberfield::polyring::IntPoly;
use fiberfield::sieve::SieveOptions;

pub use report::Report;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subcommand {
    WeakDiversity,
    StrongDiversity,
    SquarefreeDensity,
    /// Class of `a` in `Q*/(Q*)^p`, optionally compared with `with`.
    ClassifyRadical {
        a: String,
        p: u64,
        with: Option<String>,
    },
    BranchCheck,
    NormCollisions,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::WeakDiversity => "weak-diversity",
            Subcommand::StrongDiversity => "strong-diversity",
            Subcommand::SquarefreeDensity => "squarefree-density",
            Subcommand::ClassifyRadical { .. } => "classify-radical",
            Subcommand::BranchCheck => "branch-check",
            Subcommand::NormCollisions => "norm-collisions",
        }
    }
}

/// One invocation of the tool.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Subcommand,
    pub cover: Option<String>,
    pub poly: Option<String>,
    pub p: Option<u32>,
    pub n: Option<u64>,
    pub method: Method,
    /// Primes per field fingerprint.
    pub primes: usize,
    pub euler_bound: u64,
    pub output: OutputFormat,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// Pollard-rho iterations allowed per factorization.
    pub factor_budget: u64,
}

impl RunConfig {
    pub fn new(command: Subcommand) -> Self {
        RunConfig {
            command,
            cover: None,
            poly: None,
            p: None,
            n: None,
            method: Method::Exact,
            primes: FiberOptions::default().prime_budget,
            euler_bound: fiberfield::sieve::DEFAULT_EULER_BOUND,
            output: OutputFormat::Json,
            out: None,
            jobs: 0,
            factor_budget: FactorBudget::default().rho_iterations,
        }
    }

    /// Parses command-line arguments; the first item is the program name.
    pub fn from_args<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Ok(Cli::try_parse_from(args)?.into_config())
    }

    fn engine(&self) -> EngineOptions {
        EngineOptions {
            jobs: self.jobs,
            fiber: FiberOptions {
                factor_budget: FactorBudget {
                    rho_iterations: self.factor_budget,
                },
                prime_budget: self.primes,
            },
        }
    }

    fn sieve(&self) -> SieveOptions {
        SieveOptions {
            jobs: self.jobs,
            factor_budget: FactorBudget {
                rho_iterations: self.factor_budget,
            },
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(fiberfield::Error),
    Usage(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            CliError::Core(_) | CliError::Usage(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "cli: {m}"),
            CliError::Io(e) => write!(f, "cli: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<fiberfield::Error> for CliError {
    fn from(e: fiberfield::Error) -> Self {
        CliError::Core(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Result of [`run`].
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    /// Report text, unless it was written to `--out`.
    pub stdout: Option<String>,
    /// One-line diagnostic on failure.
    pub diagnostic: Option<String>,
}

/// Executes the configuration and renders the report.
pub fn run(config: &RunConfig) -> RunOutcome {
    match execute(config) {
        Ok(text) => match &config.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => RunOutcome {
                    exit_code: 0,
                    stdout: None,
                    diagnostic: None,
                },
                Err(e) => failure(CliError::Io(e)),
            },
            None => RunOutcome {
                exit_code: 0,
                stdout: Some(text),
                diagnostic: None,
            },
        },
        Err(e) => failure(e),
    }
}

fn failure(e: CliError) -> RunOutcome {
    RunOutcome {
        exit_code: e.exit_code(),
        stdout: None,
        diagnostic: Some(format!("error: {e}")),
    }
}

/// Computes the report and renders it in the configured format.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let report = build_report(config)?;
    match config.output {
        OutputFormat::Json => Ok(report.to_json(config)),
        OutputFormat::Csv => report.to_csv(),
    }
}

fn require_n(config: &RunConfig) -> Result<u64, CliError> {
    match config.n {
        Some(n) if n >= 1 => Ok(n),
        _ => Err(usage("N ≥ 1 required")),
    }
}

fn check_budgets(config: &RunConfig) -> Result<(), CliError> {
    if config.primes == 0 || config.factor_budget == 0 || config.euler_bound == 0 {
        return Err(usage("budgets must be positive"));
    }
    if config.cover.is_some() && config.poly.is_some() {
        return Err(usage("give exactly one of --cover and --poly"));
    }
    Ok(())
}

fn cover_input(config: &RunConfig) -> Result<CoverSpec, CliError> {
    match (&config.cover, &config.poly) {
        (Some(text), None) => {
            let cover = covers::parse_cover(text)?;
            if let (Some(p), Some(c)) = (config.p, cover.as_cyclic()) {
                if c.p() != p {
                    return Err(usage(format!(
                        "--p {p} disagrees with the cover's degree {}",
                        c.p()
                    )));
                }
            }
            Ok(cover)
        }
        (None, Some(text)) => {
            let p = config
                .p
                .ok_or_else(|| usage("--poly needs --p to define the cover y^p = g(x)"))?;
            Ok(covers::normalize_cyclic(p, &IntPoly::parse(text)?)?)
        }
        _ => Err(usage("give exactly one of --cover and --poly")),
    }
}

fn poly_input(config: &RunConfig) -> Result<IntPoly, CliError> {
    match (&config.cover, &config.poly) {
        (None, Some(text)) => Ok(IntPoly::parse(text)?),
        _ => Err(usage("this subcommand takes --poly")),
    }
}

fn build_report(config: &RunConfig) -> Result<Report, CliError> {
    check_budgets(config)?;
    match &config.command {
        Subcommand::WeakDiversity => {
            let n = require_n(config)?;
            let cover = cover_input(config)?;
            let r = fiberfield::diversity::weak_diversity_count(
                &cover,
                n,
                config.method,
                &config.engine(),
            )?;
            Ok(report::weak(&cover, &r))
        }
        Subcommand::StrongDiversity => {
            let n = require_n(config)?;
            let cover = cover_input(config)?;
            let r = fiberfield::diversity::strong_diversity_rank(&cover, n, &config.engine())?;
            Ok(report::strong(&r))
        }
        Subcommand::SquarefreeDensity => {
            let n = require_n(config)?;
            let h = poly_input(config)?;
            let (r, flags) =
                fiberfield::sieve::squarefree_survey(&h, n, config.euler_bound, &config.sieve())?;
            Ok(report::squarefree(&r, &flags))
        }
        Subcommand::ClassifyRadical { a, p, with } => report::classify(a, *p, with.as_deref()),
        Subcommand::BranchCheck => {
            let cover = cover_input(config)?;
            let check = covers::has_nonrational_branch_point(&cover)?;
            let points = covers::points_over_infinity(&cover).ok();
            Ok(report::branch(&cover, &check, points))
        }
        Subcommand::NormCollisions => {
            let n = require_n(config)?;
            let h = poly_input(config)?;
            let c = fiberfield::diversity::norm_collision_check(&h, n)?;
            Ok(report::norm(&h, n, &c))
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "fiberfield",
    version,
    about = "Residue-field diversity for fibers of covers of the line"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Subcommand, Debug)]
enum Cmd {
    /// Count distinct fiber fields over x = 1..N.
    WeakDiversity(Common),
    /// Rank of the fiber radicands modulo p-th powers.
    StrongDiversity(Common),
    /// Squarefree values of a polynomial over 1..N.
    SquarefreeDensity(Common),
    /// Kummer class of a rational radicand.
    ClassifyRadical {
        /// Rational radicand, e.g. 16 or -3/4.
        a: String,
        /// Prime exponent.
        #[arg(value_name = "P")]
        prime: u64,
        /// Second radicand to compare with.
        #[arg(long)]
        with: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Branch locus and points over infinity.
    BranchCheck(Common),
    /// Largest number of n <= N sharing a value of |h(n)|.
    NormCollisions(Common),
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: fiberfield::Error| e.to_string())
}

#[derive(Args, Debug)]
struct Common {
    /// Cover as F(x, y) or LHS = RHS.
    #[arg(long)]
    cover: Option<String>,
    /// Polynomial in x.
    #[arg(long)]
    poly: Option<String>,
    /// Degree of a cyclic cover y^p = g(x).
    #[arg(long)]
    p: Option<u32>,
    #[arg(long = "N")]
    n: Option<u64>,
    /// exact | ramified | fingerprint
    #[arg(long, default_value = "exact", value_parser = parse_method)]
    method: Method,
    /// Primes per field fingerprint.
    #[arg(long, default_value_t = FiberOptions::default().prime_budget)]
    primes: usize,
    #[arg(long, default_value_t = fiberfield::sieve::DEFAULT_EULER_BOUND)]
    euler_bound: u64,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Pollard-rho iterations per factorization.
    #[arg(long, default_value_t = FactorBudget::default().rho_iterations)]
    factor_budget: u64,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        let (command, c) = match self.command {
            Cmd::WeakDiversity(c) => (Subcommand::WeakDiversity, c),
            Cmd::StrongDiversity(c) => (Subcommand::StrongDiversity, c),
            Cmd::SquarefreeDensity(c) => (Subcommand::SquarefreeDensity, c),
            Cmd::ClassifyRadical {
                a,
                prime,
                with,
                common,
            } => (Subcommand::ClassifyRadical { a, p: prime, with }, common),
            Cmd::BranchCheck(c) => (Subcommand::BranchCheck, c),
            Cmd::NormCollisions(c) => (Subcommand::NormCollisions, c),
        };
        RunConfig {
            command,
            cover: c.cover,
            poly: c.poly,
            p: c.p,
            n: c.n,
            method: c.method,
            primes: c.primes,
            euler_bound: c.euler_bound,
            output: c.output,
            out: c.out,
            jobs: c.jobs,
            factor_budget: c.factor_budget,
        }
    }
}
