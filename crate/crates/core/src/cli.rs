//! Command-line front end.
//!
//! Data goes to the output stream and diagnostics to the error stream. Exit
//! codes: 0 success, 1 identity or cross-check false, 2 usage error,
//! 3 `l` not coprime to `k^2 + 1`, 4 factorization incomplete, 5 I/O or
//! catalog error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{self, EffortLimits, FactorError};
use crate::catalog::{self, IdentityRecord, RenderStyle, CatalogError, SweepError};
use crate::oracle::{self, SearchBound, VerificationReport};
use crate::solver::{self, SolveError};
use crate::Natural;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_COPRIME: i32 = 3;
pub const EXIT_FACTORIZATION_INCOMPLETE: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Milliseconds; replaces the default factorization time budget.
pub const EFFORT_ENV: &str = "ARCTAN_DIOPH_EFFORT_MS";

/// Process facts `run` needs, injected so tests stay hermetic.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub stdout_is_terminal: bool,
    /// Value of [`EFFORT_ENV`], if set.
    pub effort_ms: Option<String>,
}

#[derive(Debug, Parser)]
#[command(name = "arctan-dioph", version, about = "Solve, verify and catalog arctan(1/x) + arctan(l/y) = arctan(1/k)")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Factorization time budget in milliseconds (overrides the environment).
    #[arg(long, global = true)]
    effort_ms: Option<u64>,

    /// Pollard-rho iteration budget.
    #[arg(long, global = true)]
    max_rho_iterations: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Latex,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All solutions for one (k, l).
    Solve {
        #[arg(long, value_parser = parse_natural)]
        k: Natural,
        #[arg(long, value_parser = parse_natural)]
        l: Natural,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact check of one candidate identity.
    Verify {
        #[arg(long, value_parser = parse_natural)]
        x: Natural,
        #[arg(long, value_parser = parse_natural)]
        y: Natural,
        #[arg(long, value_parser = parse_natural)]
        k: Natural,
        #[arg(long, value_parser = parse_natural)]
        l: Natural,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Compare the solver against a brute-force search.
    Oracle {
        #[arg(long, value_parser = parse_natural)]
        k: Natural,
        #[arg(long, value_parser = parse_natural)]
        l: Natural,
        #[arg(long, value_parser = parse_natural)]
        max_x: Option<Natural>,
        #[arg(long, value_parser = parse_natural)]
        max_y: Option<Natural>,
        /// Also list pairs with gcd(l, y) > 1, which lie outside the coprime problem.
        #[arg(long)]
        unfiltered: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Write every identity for a (k, l) grid to a catalog file.
    Sweep {
        #[arg(long, value_parser = parse_natural)]
        k_min: Natural,
        #[arg(long, value_parser = parse_natural)]
        k_max: Natural,
        #[arg(long, value_parser = parse_natural)]
        l_min: Natural,
        #[arg(long, value_parser = parse_natural)]
        l_max: Natural,
        #[arg(long)]
        out: PathBuf,
    },
    /// The reference list of identities.
    Listing {
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Print the two symbolic families first.
        #[arg(long)]
        families: bool,
    },
    /// Prime factorization and divisor count.
    Factor {
        #[arg(long, value_parser = parse_natural)]
        n: Natural,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
}

fn parse_natural(s: &str) -> Result<Natural, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a non-negative decimal integer, got {s:?}"));
    }
    Natural::from_str(s).map_err(|e| e.to_string())
}

/// Failure carrying its exit code; the message goes to the error stream.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        let code = match &e {
            SolveError::NotCoprime { .. } => EXIT_NOT_COPRIME,
            SolveError::Factor(FactorError::Incomplete { .. }) => EXIT_FACTORIZATION_INCOMPLETE,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<FactorError> for Failure {
    fn from(e: FactorError) -> Self {
        SolveError::Factor(e).into()
    }
}

impl From<CatalogError> for Failure {
    fn from(e: CatalogError) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self {
            code: EXIT_IO,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, env, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn limits(cli: &Cli, env: &Env) -> Result<EffortLimits, Failure> {
    let mut limits = EffortLimits::default();
    if let Some(raw) = &env.effort_ms {
        let ms: u64 = raw
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{EFFORT_ENV} must be milliseconds, got {raw:?}")))?;
        limits = limits.with_time_budget(Duration::from_millis(ms));
    }
    if let Some(ms) = cli.effort_ms {
        limits = limits.with_time_budget(Duration::from_millis(ms));
    }
    if let Some(iters) = cli.max_rho_iterations {
        limits = limits.with_max_rho_iterations(iters);
    }
    Ok(limits)
}

fn dispatch(cli: Cli, env: &Env, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let limits = limits(&cli, env)?;
    let default_format = |f: Option<Format>, to_terminal: bool| {
        f.unwrap_or(if to_terminal { Format::Plain } else { Format::Json })
    };

    match cli.command {
        Command::Solve { k, l, format, out: path } => {
            let format = default_format(format, path.is_none() && env.stdout_is_terminal);
            let inst = solver::make_instance(k, l)?;
            let set = solver::solve_all(&inst, &limits)?;
            let records: Vec<IdentityRecord> = set
                .solutions()
                .iter()
                .map(|s| IdentityRecord::from_solution(&inst, s))
                .collect();
            let text = match format {
                Format::Json => {
                    let solutions: Vec<Value> = set
                        .solutions()
                        .iter()
                        .zip(&records)
                        .map(|(s, r)| {
                            json!({
                                "d": num(s.d()), "x": num(s.x()), "y": num(s.y()),
                                "v": num(s.v()), "verified": r.verified,
                            })
                        })
                        .collect();
                    let doc = json!({
                        "k": num(inst.k()), "l": num(inst.l()), "n": num(inst.n()),
                        "count": set.count(), "solutions": solutions,
                    });
                    format!("{doc}\n")
                }
                other => render_records(&records, other),
            };
            emit(&text, path.as_deref(), out)?;
            Ok(EXIT_OK)
        }

        Command::Verify { x, y, k, l, format } => {
            if [&x, &y, &k, &l].iter().any(|v| v.is_zero()) {
                return Err(Failure::usage("x, y, k and l must be positive"));
            }
            let report = oracle::verify_exact(&x, &y, &k, &l);
            let text = match default_format(format, env.stdout_is_terminal) {
                Format::Json => format!("{}\n", report_json(&report)),
                _ => report_plain(&report),
            };
            out.write_all(text.as_bytes())?;
            Ok(if report.holds { EXIT_OK } else { EXIT_FALSE })
        }

        Command::Oracle { k, l, max_x, max_y, unfiltered, format } => {
            let inst = solver::make_instance(k, l)?;
            let extremal = SearchBound::extremal(&inst).expect("big naturals do not overflow");
            let bound = SearchBound::new(
                max_x.unwrap_or_else(|| extremal.max_x().clone()),
                max_y.unwrap_or_else(|| extremal.max_y().clone()),
            )
            .map_err(|e| Failure::usage(e.to_string()))?;
            let cmp = oracle::compare(&inst, &bound, &limits)?;
            let loose = unfiltered
                .then(|| oracle::brute_force_solutions_unfiltered(inst.k(), inst.l(), &bound));
            let text = match default_format(format, env.stdout_is_terminal) {
                Format::Json => {
                    let mut doc = json!({
                        "k": num(inst.k()), "l": num(inst.l()),
                        "max_x": num(bound.max_x()), "max_y": num(bound.max_y()),
                        "solver": pairs_json(&cmp.solver), "oracle": pairs_json(&cmp.oracle),
                        "agree": cmp.agree(),
                    });
                    if let Some(loose) = &loose {
                        doc["unfiltered"] = pairs_json(loose);
                    }
                    format!("{doc}\n")
                }
                _ => {
                    let mut s = format!(
                        "bound: x <= {}, y <= {}\nsolver: {}\noracle: {}\nagree: {}\n",
                        bound.max_x(),
                        bound.max_y(),
                        pairs_plain(&cmp.solver),
                        pairs_plain(&cmp.oracle),
                        cmp.agree()
                    );
                    if let Some(loose) = &loose {
                        s.push_str(&format!(
                            "unfiltered (includes gcd(l, y) > 1, outside the coprime problem): {}\n",
                            pairs_plain(loose)
                        ));
                    }
                    s
                }
            };
            out.write_all(text.as_bytes())?;
            Ok(if cmp.agree() { EXIT_OK } else { EXIT_FALSE })
        }

        Command::Sweep { k_min, k_max, l_min, l_max, out: path } => {
            let outcome = catalog::sweep(k_min..=k_max, l_min..=l_max, &limits)?;
            let written = catalog::write_catalog(&path, &outcome.records)?;
            writeln!(
                err,
                "wrote {written} records to {} ({} pairs skipped: l not coprime to k^2 + 1; {} factorization failures)",
                path.display(),
                outcome.skipped_not_coprime,
                outcome.failures.len()
            )?;
            for f in &outcome.failures {
                writeln!(err, "  k={} l={}: {}", f.k, f.l, f.error)?;
            }
            Ok(EXIT_OK)
        }

        Command::Listing { format, families } => {
            let records = catalog::reference_listing();
            let format = default_format(format, env.stdout_is_terminal);
            let mut text = String::new();
            if families {
                for t in catalog::FAMILY_TEMPLATES {
                    text.push_str(&format!("# {t}\n"));
                }
            }
            if format == Format::Plain {
                for r in &records {
                    text.push_str(&catalog::render_identity(r, RenderStyle::Plain));
                    for a in &r.annotations {
                        text.push_str("  # ");
                        text.push_str(a);
                    }
                    text.push('\n');
                }
            } else {
                text.push_str(&render_records(&records, format));
            }
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }

        Command::Factor { n, format } => {
            if n.is_zero() {
                return Err(Failure::usage("n must be positive"));
            }
            let f = arith::factorize(&n, &limits)?;
            let tau = arith::divisor_count(&f);
            let text = match default_format(format, env.stdout_is_terminal) {
                Format::Json => {
                    let factors: Vec<Value> = f
                        .factors()
                        .iter()
                        .map(|(p, e)| json!([num(p), e]))
                        .collect();
                    format!(
                        "{}\n",
                        json!({ "n": num(&n), "factors": factors, "divisor_count": num(&tau) })
                    )
                }
                _ => format!("{f}\ndivisors: {tau}\n"),
            };
            out.write_all(text.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn num(n: &Natural) -> Value {
    Value::Number(serde_json::Number::from_str(&n.to_string()).expect("decimal digits"))
}

fn pairs_json(pairs: &[(Natural, Natural)]) -> Value {
    Value::Array(pairs.iter().map(|(x, y)| json!([num(x), num(y)])).collect())
}

fn pairs_plain(pairs: &[(Natural, Natural)]) -> String {
    if pairs.is_empty() {
        return "(none)".into();
    }
    pairs
        .iter()
        .map(|(x, y)| format!("({x}, {y})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_records(records: &[IdentityRecord], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(catalog::CSV_HEADER);
            s.push('\n');
            for r in records {
                s.push_str(&catalog::render_csv_row(r));
                s.push('\n');
            }
        }
        _ => {
            let style = match format {
                Format::Latex => RenderStyle::Latex,
                Format::Json => RenderStyle::Json,
                _ => RenderStyle::Plain,
            };
            for r in records {
                s.push_str(&catalog::render_identity(r, style));
                s.push('\n');
            }
        }
    }
    s
}

fn fraction(r: &Option<arith::Rational>) -> String {
    r.as_ref().map_or_else(|| "undefined".into(), |r| r.to_string())
}

fn report_plain(r: &VerificationReport) -> String {
    format!(
        "holds: {}\ndomain_ok: {}\nlhs_tangent: {}\nrhs_tangent: {}\nfailure: {}\n",
        r.holds,
        r.domain_ok,
        fraction(&r.lhs_tangent),
        fraction(&r.rhs_tangent),
        r.failure_reason.map_or("none", |f| f.as_str()),
    )
}

fn report_json(r: &VerificationReport) -> Value {
    let frac = |r: &Option<arith::Rational>| r.as_ref().map(|r| Value::String(r.to_string()));
    json!({
        "holds": r.holds,
        "domain_ok": r.domain_ok,
        "lhs_tangent": frac(&r.lhs_tangent),
        "rhs_tangent": frac(&r.rhs_tangent),
        "failure_reason": r.failure_reason.map(|f| f.as_str()),
    })
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => out.write_all(text.as_bytes()),
    }
}
