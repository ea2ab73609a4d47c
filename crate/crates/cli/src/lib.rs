//! Command-line front end: argument parsing, sweep dispatch and reports.
//!
//! [`run`] is the library entry point used by the binary and the acceptance
//! suite; it never touches the process (no printing, no exit).

pub mod report;
mod verbs;

use std::path::PathBuf;
use std::time::Instant;

use birkhoff::Stratum;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub use report::{Item, Outcome, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("computation failed: {0}")]
    Compute(#[from] birkhoff::Error),
    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
}

/// Every verb, in listing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verb {
    Closure,
    HSymmetry,
    Currents,
    Curve,
    Tangent,
    Dkp,
    Cocycle,
    Coboundary,
    Jacobi,
    PoissonIdeal,
    AnsatzConstraints,
    Equivalence,
    DarbouxSystem,
    Hirota,
    TauSubstitution,
    Stratum1Hierarchy,
    Sigma12,
}

impl Verb {
    pub const ALL: [Verb; 17] = [
        Verb::Closure,
        Verb::HSymmetry,
        Verb::Currents,
        Verb::Curve,
        Verb::Tangent,
        Verb::Dkp,
        Verb::Cocycle,
        Verb::Coboundary,
        Verb::Jacobi,
        Verb::PoissonIdeal,
        Verb::AnsatzConstraints,
        Verb::Equivalence,
        Verb::DarbouxSystem,
        Verb::Hirota,
        Verb::TauSubstitution,
        Verb::Stratum1Hierarchy,
        Verb::Sigma12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Closure => "verify closure",
            Verb::HSymmetry => "verify h-symmetry",
            Verb::Currents => "derive currents",
            Verb::Curve => "derive curve",
            Verb::Tangent => "derive tangent",
            Verb::Dkp => "derive dkp",
            Verb::Cocycle => "verify cocycle",
            Verb::Coboundary => "verify coboundary",
            Verb::Jacobi => "verify jacobi",
            Verb::PoissonIdeal => "verify poisson-ideal",
            Verb::AnsatzConstraints => "verify ansatz-constraints",
            Verb::Equivalence => "verify equivalence",
            Verb::DarbouxSystem => "derive darboux-system",
            Verb::Hirota => "derive hirota",
            Verb::TauSubstitution => "verify tau-substitution",
            Verb::Stratum1Hierarchy => "derive stratum1-hierarchy",
            Verb::Sigma12 => "verify sigma12",
        }
    }

    fn summary(self) -> &'static str {
        match self {
            Verb::Closure => "closure constraints from the Laurent basis against the closed form",
            Verb::HSymmetry => "k H[i,k] - i H[k,i] in big-cell normal form",
            Verb::Currents => "p_n through the generators of the stratum",
            Verb::Curve => "the Σ₁ elliptic curve, printed and re-derived",
            Verb::Tangent => "tangent system, its linearization and the symmetry relations",
            Verb::Dkp => "first or second dKP flow from tangent and symmetry relations",
            Verb::Cocycle => "cocycle defect of random coboundaries and of the dKP cocycle",
            Verb::Coboundary => "tangent cocycle as a coboundary; tau form of the dKP cocycle",
            Verb::Jacobi => "Jacobi identity for the Darboux and jet tables",
            Verb::PoissonIdeal => "bracket of h*_n, h*_m stays in the ideal",
            Verb::AnsatzConstraints => "alpha/beta conditions against the two constraint families",
            Verb::Equivalence => "constraint families with J -> Delta, modulo the big-cell relations",
            Verb::DarbouxSystem => "constraint families in jets, modulo the dKP flows",
            Verb::Hirota => "dispersionless Hirota-Miwa equations",
            Verb::TauSubstitution => "closure constraints in tau form against Hirota-Miwa",
            Verb::Stratum1Hierarchy => "x4-flows of the Σ₁ hierarchy from coisotropy",
            Verb::Sigma12 => "bracket of externally supplied Σ₁,₂ generators (stub)",
        }
    }
}

/// Verb listing shown by `list` and on a bare invocation.
pub fn list_verbs() -> String {
    let mut s = String::from("verbs:\n");
    for v in Verb::ALL {
        s += &format!("  {:<28} {}\n", v.name(), v.summary());
    }
    s
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// Third-sum weight 1/(i(m-l)).
    Literal,
    /// Third-sum weight 1/(l(m-l)).
    Closure,
}

/// A fully parsed invocation. Unset bounds take per-verb defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub verb: Verb,
    pub stratum: Option<Stratum>,
    pub jmax: Option<i32>,
    pub kmax: Option<i32>,
    pub mmax: Option<i32>,
    pub nmax: Option<i32>,
    pub order: Option<i32>,
    pub level: Option<u8>,
    pub form: Option<Form>,
    pub gauge: Option<String>,
    pub seed: Option<u64>,
    pub dkp_max: Option<i32>,
    pub generators: Option<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn new(verb: Verb) -> Self {
        RunConfig {
            verb,
            stratum: None,
            jmax: None,
            kmax: None,
            mmax: None,
            nmax: None,
            order: None,
            level: None,
            form: None,
            gauge: None,
            seed: None,
            dkp_max: None,
            generators: None,
            format: Format::Json,
            out: None,
            threads: None,
        }
    }
}

fn parse_stratum(s: &str) -> Result<Stratum, String> {
    s.parse::<Stratum>().map_err(|e| format!("{e} (expected big-cell or sigma1)"))
}

#[derive(Debug, Parser)]
#[command(name = "birkhoff", version, about = "Exact checks on the big cell and the first Birkhoff stratum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweeps whose items are all expected to vanish.
    Verify {
        #[command(subcommand)]
        verb: VerifyVerb,
    },
    /// Constructions, compared with printed forms where those exist.
    Derive {
        #[command(subcommand)]
        verb: DeriveVerb,
    },
    /// List all verbs.
    List,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum VerifyVerb {
    /// Closure constraints from the Laurent basis against the closed form.
    Closure,
    /// k H[i,k] - i H[k,i] in big-cell normal form.
    #[command(name = "h-symmetry")]
    HSymmetry,
    /// Cocycle defect of random coboundaries and of the dKP cocycle.
    Cocycle,
    /// Tangent cocycle as a coboundary, and the tau form of the dKP cocycle.
    Coboundary,
    /// Jacobi identity for the Darboux and jet tables.
    Jacobi,
    /// The bracket of h*_n and h*_m reduces to zero on the ideal.
    #[command(name = "poisson-ideal")]
    PoissonIdeal,
    /// Alpha/beta conditions against the two constraint families.
    #[command(name = "ansatz-constraints")]
    AnsatzConstraints,
    /// Constraint families with J -> Delta, modulo the big-cell relations.
    Equivalence,
    /// Closure constraints in tau form against the Hirota-Miwa equations.
    #[command(name = "tau-substitution")]
    TauSubstitution,
    /// Stub: brackets of externally supplied generators (--generators FILE).
    Sigma12,
}

#[derive(Clone, Copy, Debug, Subcommand)]
pub enum DeriveVerb {
    /// p_n through the generators of the stratum.
    Currents,
    /// The Σ₁ elliptic curve, printed and re-derived.
    Curve,
    /// Tangent system, its linearization and the symmetry relations.
    Tangent,
    /// dKP flows (--level 1 or 2).
    Dkp,
    /// Constraint families in jets, modulo the dKP flows.
    #[command(name = "darboux-system")]
    DarbouxSystem,
    /// Dispersionless Hirota-Miwa equations.
    Hirota,
    /// x4-flows of the Σ₁ hierarchy.
    #[command(name = "stratum1-hierarchy")]
    Stratum1Hierarchy,
}

#[derive(Debug, Args)]
pub struct Opts {
    /// big-cell or sigma1.
    #[arg(long, global = true, value_parser = parse_stratum)]
    pub stratum: Option<Stratum>,
    /// Upper bound on the first index.
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub jmax: Option<i32>,
    /// Upper bound on the second index.
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub kmax: Option<i32>,
    /// Upper bound on the third (lower) index.
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub mmax: Option<i32>,
    /// Upper bound for n,m-indexed sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub nmax: Option<i32>,
    /// Truncation order of the Laurent basis (default mmax + jmax + kmax + 2).
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub order: Option<i32>,
    /// dKP flow level.
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub level: Option<u8>,
    /// Weight of the third Hirota-Miwa sum.
    #[arg(long, global = true, value_enum)]
    pub form: Option<Form>,
    /// Expression substituted for v[0] in the Σ₁ hierarchy.
    #[arg(long, global = true)]
    pub gauge: Option<String>,
    /// Seed for the random coboundaries.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Index bound for the dKP cocycle check.
    #[arg(long, global = true, value_parser = clap::value_parser!(i32).range(1..))]
    pub dkp_max: Option<i32>,
    /// File with one generator per line (verify sigma12).
    #[arg(long, global = true)]
    pub generators: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; BIRKHOFF_THREADS takes precedence.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,
}

impl Cli {
    /// `None` for `list`.
    pub fn into_config(self) -> Option<RunConfig> {
        let verb = match self.command {
            Command::List => return None,
            Command::Verify { verb } => match verb {
                VerifyVerb::Closure => Verb::Closure,
                VerifyVerb::HSymmetry => Verb::HSymmetry,
                VerifyVerb::Cocycle => Verb::Cocycle,
                VerifyVerb::Coboundary => Verb::Coboundary,
                VerifyVerb::Jacobi => Verb::Jacobi,
                VerifyVerb::PoissonIdeal => Verb::PoissonIdeal,
                VerifyVerb::AnsatzConstraints => Verb::AnsatzConstraints,
                VerifyVerb::Equivalence => Verb::Equivalence,
                VerifyVerb::TauSubstitution => Verb::TauSubstitution,
                VerifyVerb::Sigma12 => Verb::Sigma12,
            },
            Command::Derive { verb } => match verb {
                DeriveVerb::Currents => Verb::Currents,
                DeriveVerb::Curve => Verb::Curve,
                DeriveVerb::Tangent => Verb::Tangent,
                DeriveVerb::Dkp => Verb::Dkp,
                DeriveVerb::DarbouxSystem => Verb::DarbouxSystem,
                DeriveVerb::Hirota => Verb::Hirota,
                DeriveVerb::Stratum1Hierarchy => Verb::Stratum1Hierarchy,
            },
        };
        let o = self.opts;
        Some(RunConfig {
            verb,
            stratum: o.stratum,
            jmax: o.jmax,
            kmax: o.kmax,
            mmax: o.mmax,
            nmax: o.nmax,
            order: o.order,
            level: o.level,
            form: o.form,
            gauge: o.gauge,
            seed: o.seed,
            dkp_max: o.dkp_max,
            generators: o.generators,
            format: o.format,
            out: o.out,
            threads: o.threads.map(|t| t as usize),
        })
    }
}

/// Thread count from `BIRKHOFF_THREADS`, then `--threads`.
pub fn thread_count(cfg: &RunConfig) -> Result<Option<usize>, CliError> {
    match std::env::var("BIRKHOFF_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("BIRKHOFF_THREADS = {s:?} is not a positive integer"))),
        },
        Err(_) => Ok(cfg.threads),
    }
}

/// Runs the sweep. Parallel parts use the current rayon pool.
pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    let start = Instant::now();
    let (bounds, outcome) = verbs::dispatch(cfg)?;
    let elapsed = start.elapsed().as_millis() as u64;
    Ok(Report::new(cfg.verb.name(), bounds, outcome, elapsed))
}

/// Renders the report in the configured format.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
        Format::Latex => report.to_latex(),
    }
}
