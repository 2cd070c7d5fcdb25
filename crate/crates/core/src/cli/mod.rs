//! Command-line front end. `run` returns the process exit code: 0 on success or a finite
//! verdict, 2 on an unresolved orbit, 1 on any error or failed verification.

mod commands;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use crate::algebraic::{parse_rational, AlgebraicReal, IntPoly};
use crate::betamap::SignPattern;
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "genbeta", version, about = "Exact orbits of generalized beta-maps and their conjugate sets")]
pub struct Cli {
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Mantissa bits for the floating-point diagnostics.
    #[arg(long, global = true, env = "GENBETA_PRECISION_BITS", default_value_t = 256)]
    pub precision: usize,
    /// Seed for the randomized suites and samples.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct BetaArgs {
    /// Integer coefficients, constant term first, e.g. `-1,-1,1` for x^2 - x - 1.
    #[arg(long, alias = "beta-poly", allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Isolating interval `lo,hi` for the root of `--poly` (default: its largest root above 1).
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Rational beta `p/q`.
    #[arg(long)]
    pub rational: Option<String>,
    /// golden | plastic | sqrt2plus2
    #[arg(long)]
    pub named: Option<String>,
    /// Decimal beta, read as an exact rational.
    #[arg(long)]
    pub beta: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub beta: BetaArgs,
    /// e0 | e1 | alt | custom:PRE/PER
    #[arg(long, default_value = "e0")]
    pub pattern: String,
    #[arg(long, default_value_t = 1000)]
    pub max_steps: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact orbit of 1 and its verdict, as JSON.
    Classify(OrbitArgs),
    /// Characteristic polynomial of a finite orbit.
    Charpoly(OrbitArgs),
    /// Roots of the characteristic polynomial (CSV `re,im,residual,is_beta`).
    Conjugates {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Constructors.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Membership of z in G_I.
    Member {
        /// `re,im`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// unit | sym
        #[arg(long = "box", default_value = "unit")]
        coeff_box: String,
        #[arg(long, default_value_t = 40)]
        degree: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Conjugate point cloud as CSV `re,im,source_beta,pattern,residual`.
    Cloud {
        /// e0 | e1 | alt
        #[arg(long)]
        pattern: String,
        /// JSON sample spec for e1/alt.
        #[arg(long)]
        spec: Option<PathBuf>,
        /// Random samples for e1/alt when no spec is given.
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 2000)]
        max_count: usize,
    },
    /// Conjugacy residual and finite-orbit consistency for F_beta.
    Chebyshev {
        #[command(flatten)]
        beta: BetaArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Overrides --precision.
        #[arg(long)]
        bits: Option<usize>,
        #[arg(long, default_value_t = 200)]
        max_steps: usize,
    },
    /// Invariant suites: lemma2, lemma1, golden-bound, positivity, membership, chebyshev, all.
    Verify { suite: String },
}

#[derive(Subcommand, Debug)]
pub enum ConstructCmd {
    /// beta from a digit vector M(0), ..., M(N).
    Lemma1 {
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Simple Yrrap approximation of target points.
    Thma {
        #[arg(long)]
        targets: String,
        #[arg(long)]
        eps: String,
    },
    /// Simple E_alt approximation with prescribed cumulative signs.
    Thmb {
        #[arg(long)]
        targets: String,
        #[arg(long, allow_hyphen_values = true)]
        signs: String,
        #[arg(long)]
        eps: String,
    },
    /// Parry number with a root of f in (-1, 0), derived from a seed.
    Nonyrrap {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Steps of the floating-point E_1 orbit attached to the certificate.
        #[arg(long, default_value_t = 10_000)]
        approx_steps: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SeedArgs {
    /// Named seed (golden | plastic | sqrt2plus2).
    #[arg(long)]
    pub seed_beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub seed_poly: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub seed_interval: Option<String>,
}

pub(crate) fn parse_list<T>(s: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| f(t.trim()).ok_or_else(|| Error::Parse(format!("bad {what} entry {t:?} in {s:?}"))))
        .collect()
}

pub(crate) fn parse_rationals(s: &str) -> Result<Vec<BigRational>> {
    parse_list(s, "rational", |t| parse_rational(t).ok())
}

fn poly_beta(poly: &str, interval: Option<&str>) -> Result<AlgebraicReal> {
    let c = parse_list(poly, "coefficient", |t| t.parse::<i64>().ok())?;
    let p = IntPoly::from_i64s(&c);
    if p.degree() < 1 {
        return Err(Error::Parse(format!("polynomial {poly:?} has no roots")));
    }
    match interval {
        Some(iv) => {
            let b = parse_rationals(iv)?;
            if b.len() != 2 {
                return Err(Error::Parse(format!("interval needs two endpoints, got {iv:?}")));
            }
            AlgebraicReal::new(p, b[0].clone(), b[1].clone())
        }
        None => AlgebraicReal::largest_root_above(&p, &BigRational::from_integer(1.into()))
            .ok_or_else(|| Error::Domain(format!("{p} has no root above 1"))),
    }
}

fn named_beta(name: &str) -> Result<AlgebraicReal> {
    AlgebraicReal::named(name).ok_or_else(|| Error::Parse(format!("unknown named beta {name:?}")))
}

impl BetaArgs {
    pub fn resolve(&self) -> Result<AlgebraicReal> {
        let given = [&self.poly, &self.rational, &self.named, &self.beta].iter().filter(|o| o.is_some()).count();
        if given != 1 {
            return Err(Error::Parse("give exactly one of --poly, --rational, --named, --beta".into()));
        }
        if self.interval.is_some() && self.poly.is_none() {
            return Err(Error::Parse("--interval requires --poly".into()));
        }
        if let Some(p) = &self.poly {
            return poly_beta(p, self.interval.as_deref());
        }
        if let Some(n) = &self.named {
            return named_beta(n);
        }
        let s = self.rational.as_ref().or(self.beta.as_ref()).expect("counted above");
        Ok(AlgebraicReal::from_rational(parse_rational(s)?))
    }
}

impl SeedArgs {
    pub fn resolve(&self) -> Result<AlgebraicReal> {
        match (&self.seed_beta, &self.seed_poly) {
            (Some(n), None) => named_beta(n),
            (None, Some(p)) => poly_beta(p, self.seed_interval.as_deref()),
            _ => Err(Error::Parse("give exactly one of --seed-beta, --seed-poly".into())),
        }
    }
}

impl OrbitArgs {
    pub fn pattern(&self) -> Result<SignPattern> {
        self.pattern.parse()
    }
}

/// Writes to a temporary file beside `path` and renames it into place.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Error::Domain(format!("writing {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(content.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Command::Classify(a) => commands::classify(a),
        Command::Charpoly(a) => commands::charpoly(a),
        Command::Conjugates { orbit, tol, format } => commands::conjugates(orbit, *tol, format),
        Command::Construct(c) => commands::construct(c, cli.precision),
        Command::Member { z, coeff_box, degree, tol } => commands::member(z, coeff_box, *degree, *tol),
        Command::Cloud { pattern, spec, random, depth, max_count } => {
            commands::cloud(pattern, spec.as_deref(), *random, *depth, *max_count, cli.seed)
        }
        Command::Chebyshev { beta, samples, bits, max_steps } => {
            commands::chebyshev(beta, *samples, bits.unwrap_or(cli.precision), *max_steps)
        }
        Command::Verify { suite } => verify::run_suite(suite, cli.seed),
    }
}

fn run_cli(cli: Cli) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_ERROR;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(out) => {
            let written = match &cli.out {
                Some(p) => write_atomic(p, &out.text),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnresolvedOrbit { .. } => EXIT_UNRESOLVED,
                _ => EXIT_ERROR,
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_cli(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}
