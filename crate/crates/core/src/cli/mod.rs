//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the rendered output, so it can be driven from tests.

mod bench;
mod verify;

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cubic::{self, depress, CubicProblem, GeneralCubic};
use crate::cuberoot::{self, optimal_a, CubeRootProblem};
use crate::error::Error;
use crate::exactnum::{pow2, FixedReal};
use crate::mthroot::{self, MthRootProblem};
use crate::oracle;
use crate::polyroot::{self, GeneralPolyProblem, Outcome, ScanBudget};
use crate::report::{ConvergenceReport, ReportRow, Status};

pub use verify::Suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_UNCONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "khovanskii", version, about = "Rational approximation of algebraic numbers from integer matrix powers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cube root of alpha from the 3x3 shifted matrix.
    Cbrt {
        #[arg(long)]
        alpha: BigInt,
        #[arg(long, default_value = "auto")]
        a: AParam,
        /// Last index n to tabulate.
        #[arg(long, default_value_t = 40)]
        iters: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Real root of x^3 - p x - q, or of a general cubic via depression.
    Cubic {
        #[arg(long, allow_hyphen_values = true)]
        p: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<BigInt>,
        /// Coefficients a,b,c,d of a x^3 + b x^2 + c x + d.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        general: Option<Vec<BigInt>>,
        #[arg(long, default_value_t = 80)]
        iters: u64,
        #[command(flatten)]
        common: Common,
    },
    /// m-th root of alpha from the m x m matrix, doubling n.
    Mthroot {
        #[arg(long)]
        alpha: BigInt,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "auto")]
        a: AParam,
        /// Largest power n tried.
        #[arg(long, default_value_t = mthroot::DEFAULT_N_CAP)]
        iters: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Root of a general polynomial from the (k, l) matrix.
    Polyroot {
        /// Ascending coefficients a0,...,am.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        coeffs: Vec<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<BigInt>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<BigInt>,
        /// Scan a (k, l) grid instead of a single pair.
        #[arg(long, conflicts_with_all = ["k", "l"])]
        scan: bool,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k_min: i64,
        #[arg(long, default_value_t = 8, allow_hyphen_values = true)]
        k_max: i64,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        l_min: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        l_max: i64,
        /// Largest power n tried.
        #[arg(long, default_value_t = polyroot::DEFAULT_MAX_N)]
        iters: u64,
        #[arg(long, default_value_t = polyroot::DEFAULT_AGREE_BITS)]
        agree_bits: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite against the independent oracles.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare fitted convergence rates with the predicted ones.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Precision of reported errors.
    #[arg(long, default_value_t = 256)]
    pub precision_bits: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Converged means the final error (or agreement) is below 2^-tol_bits.
    #[arg(long, default_value_t = 20)]
    pub tol_bits: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AParam {
    Auto,
    Int(BigInt),
}

impl FromStr for AParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "auto" {
            return Ok(AParam::Auto);
        }
        s.parse().map(AParam::Int).map_err(|_| format!("expected an integer or `auto`, got `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn ok(code: i32, stdout: String) -> Self {
        RunOutput {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn err(code: i32, stderr: String) -> Self {
        RunOutput {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::ParameterOutOfRange { .. } | Error::Dimension { .. } | Error::Unsupported(_) => {
            EXIT_DOMAIN
        }
        Error::Verification(_) => EXIT_VERIFICATION,
        Error::UnresolvedComparison { .. } => EXIT_UNCONVERGED,
    }
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                RunOutput::ok(code, text)
            } else {
                RunOutput::err(code, text)
            };
        }
    };
    match execute(cli.command) {
        Ok(out) => out,
        Err(e) => RunOutput::err(exit_code(&e), format!("error: {e}\n")),
    }
}

type Res<T> = crate::Result<T>;

fn execute(cmd: Command) -> Res<RunOutput> {
    match cmd {
        Command::Cbrt { alpha, a, iters, common } => cbrt(alpha, a, iters, &common),
        Command::Cubic {
            p,
            q,
            general,
            iters,
            common,
        } => match (p, q, general) {
            (Some(p), Some(q), None) => cubic_pq(p, q, iters, &common),
            (None, None, Some(g)) => cubic_general(&g, iters, &common),
            _ => Ok(RunOutput::err(
                EXIT_USAGE,
                "error: give either --p and --q, or --general a,b,c,d\n".into(),
            )),
        },
        Command::Mthroot {
            alpha,
            m,
            a,
            iters,
            common,
        } => mth(alpha, m, a, iters, &common),
        Command::Polyroot {
            coeffs,
            k,
            l,
            scan,
            k_min,
            k_max,
            l_min,
            l_max,
            iters,
            agree_bits,
            common,
        } => {
            if scan {
                let budget = ScanBudget {
                    max_n: iters,
                    agree_bits,
                };
                poly_scan(&coeffs, k_min..=k_max, l_min..=l_max, budget, common.format)
            } else {
                match (k, l) {
                    (Some(k), Some(l)) => poly_single(coeffs, k, l, iters, agree_bits, &common),
                    _ => Ok(RunOutput::err(EXIT_USAGE, "error: give --k and --l, or --scan\n".into())),
                }
            }
        }
        Command::Verify { suite, seed, format } => {
            let results = verify::run_suite(suite, seed)?;
            let failed = results.iter().any(|r| r.failed > 0);
            let text = verify::render(&results, format);
            Ok(RunOutput::ok(if failed { EXIT_VERIFICATION } else { EXIT_OK }, text))
        }
        Command::Bench { seed, common } => {
            let rows = bench::run_bench(seed, common.precision_bits)?;
            Ok(RunOutput::ok(EXIT_OK, bench::render(&rows, common.format)))
        }
    }
}

#[derive(Serialize)]
struct RunReport<'a> {
    problem: Value,
    method: &'static str,
    precision_bits: u32,
    rows: &'a [ReportRow],
    rate_estimate: &'a Option<FixedReal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    predicted_rate: &'a Option<FixedReal>,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

/// Converged when the last row's error is below `2^-tol_bits`.
fn status_from_error(report: &ConvergenceReport, tol_bits: u32) -> Status {
    let tol = BigRational::new(BigInt::one(), pow2(tol_bits));
    match report.rows.last().and_then(|r| r.abs_error.as_ref()) {
        Some(e) if e.to_rational() < tol => Status::Converged,
        _ => Status::Unconverged,
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Exact | Status::Converged => EXIT_OK,
        Status::Unconverged => EXIT_UNCONVERGED,
    }
}

fn emit(
    problem: Value,
    method: &'static str,
    report: &ConvergenceReport,
    status: Status,
    details: Option<Value>,
    format: Format,
) -> RunOutput {
    let text = match format {
        Format::Json => {
            let r = RunReport {
                problem,
                method,
                precision_bits: report.precision_bits,
                rows: &report.rows,
                rate_estimate: &report.rate_estimate,
                predicted_rate: &report.predicted_rate,
                status,
                details,
            };
            let mut s = serde_json::to_string_pretty(&r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(report),
        Format::Text => render_text(&problem, method, report, status),
    };
    RunOutput::ok(status_code(status), text)
}

fn fmt_sci(x: &Option<FixedReal>) -> String {
    x.as_ref().map(|v| format!("{:.6e}", v.to_f64())).unwrap_or_default()
}

fn fmt_rate(x: &Option<FixedReal>) -> String {
    x.as_ref().map(|v| format!("{:.6}", v.to_f64())).unwrap_or_default()
}

pub const CSV_HEADER: &str = "n,num,den,decimal,abs_error,rate_window";

fn render_csv(report: &ConvergenceReport) -> String {
    let mut s = String::new();
    writeln!(s, "{CSV_HEADER}").unwrap();
    for r in &report.rows {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            r.n,
            r.num,
            r.den,
            r.decimal,
            fmt_sci(&r.abs_error),
            fmt_rate(&r.rate_window)
        )
        .unwrap();
    }
    s
}

fn render_text(problem: &Value, method: &str, report: &ConvergenceReport, status: Status) -> String {
    let mut s = String::new();
    writeln!(s, "problem: {problem}").unwrap();
    writeln!(s, "method: {method}").unwrap();
    writeln!(s, "status: {status}").unwrap();
    writeln!(s, "predicted_rate: {}", fmt_rate(&report.predicted_rate)).unwrap();
    writeln!(s, "rate_estimate: {}", fmt_rate(&report.rate_estimate)).unwrap();
    writeln!(s, "{:>6}  {:>14}  {:>14}  {:>10}", "n", "decimal", "abs_error", "rate").unwrap();
    for r in &report.rows {
        writeln!(
            s,
            "{:>6}  {:>14}  {:>14}  {:>10}",
            r.n,
            r.decimal,
            fmt_sci(&r.abs_error),
            fmt_rate(&r.rate_window)
        )
        .unwrap();
    }
    s
}

fn cbrt(alpha: BigInt, a: AParam, iters: u64, c: &Common) -> Res<RunOutput> {
    let (a, details) = match a {
        AParam::Auto => {
            let opt = optimal_a(&alpha)?;
            (opt.chosen.clone(), Some(json!({ "a_source": "optimal", "optimal": to_value(&opt) })))
        }
        AParam::Int(a) => (a, None),
    };
    let problem = CubeRootProblem::new(alpha.clone(), a.clone())?;
    let report = cuberoot::convergence_report(&problem, iters, c.precision_bits)?;
    let last = report.rows.last().map(|r| BigRational::new(r.num.clone(), r.den.clone()));
    let status = if last.is_some_and(|r| problem.is_exact(&r)) {
        Status::Exact
    } else {
        status_from_error(&report, c.tol_bits)
    };
    let pj = json!({ "alpha": alpha.to_string(), "a": a.to_string(), "root_order": 3 });
    Ok(emit(pj, "cuberoot_matrix_power", &report, status, details, c.format))
}

fn cubic_pq(p: BigInt, q: BigInt, iters: u64, c: &Common) -> Res<RunOutput> {
    let prob = CubicProblem::new(p, q)?;
    let report = cubic::convergence_report(&prob, iters, c.precision_bits)?;
    let cardano = cubic::cardano_reference(&prob, c.precision_bits)?;
    let status = status_from_error(&report, c.tol_bits);
    let details = json!({ "cardano": to_value(&cardano) });
    Ok(emit(to_value(&prob), "cubic_recurrence", &report, status, Some(details), c.format))
}

fn cubic_general(g: &[BigInt], iters: u64, c: &Common) -> Res<RunOutput> {
    let [a, b, cc, d] = g else {
        return Ok(RunOutput::err(EXIT_USAGE, "error: --general needs exactly four values a,b,c,d\n".into()));
    };
    let general = GeneralCubic::new(a.clone(), b.clone(), cc.clone(), d.clone());
    let dep = depress(&general)?;
    let prob = dep.problem()?;
    let rows: Vec<(u64, BigRational)> = prob
        .iter()
        .run_to(iters)
        .into_iter()
        .map(|(n, y)| (n, dep.back_map.apply(&y)))
        .collect();
    let oracle = oracle::real_root(&general.coefficients(), c.precision_bits + 32)?
        .ok_or_else(|| Error::Verification("no bracket found for the real root".into()))?
        .to_interval();
    let predicted = cubic::subdominant_ratio(&prob, 32)?;
    let report = ConvergenceReport::build(&rows, Some(&oracle), c.precision_bits, Some(predicted));
    let status = status_from_error(&report, c.tol_bits);
    let pj = json!({ "general": to_value(&general), "depressed": to_value(&dep), "reduced": to_value(&prob) });
    Ok(emit(pj, "cubic_recurrence_depressed", &report, status, None, c.format))
}

fn mth(alpha: BigInt, m: u32, a: AParam, cap: u64, c: &Common) -> Res<RunOutput> {
    let (prob, source) = match a {
        AParam::Auto => (MthRootProblem::with_default_a(alpha, m)?, "heuristic_ceil_root"),
        AParam::Int(a) => (MthRootProblem::new(alpha, m, a)?, "user"),
    };
    let approx = mthroot::approximate_root_with(&prob, c.tol_bits, cap, c.precision_bits)?;
    let diag = mthroot::diagonalize(&prob, 64)?;
    let details = json!({
        "a_source": source,
        "agreement_bits": approx.agreement_bits,
        "eigen": to_value(&diag),
    });
    Ok(emit(
        to_value(&prob),
        "mthroot_matrix_doubling",
        &approx.report,
        approx.status,
        Some(details),
        c.format,
    ))
}

fn poly_single(coeffs: Vec<BigInt>, k: BigInt, l: BigInt, max_n: u64, agree_bits: u32, c: &Common) -> Res<RunOutput> {
    let prob = GeneralPolyProblem::new(coeffs, k, l)?;
    let lim = polyroot::iterate_general(&prob, max_n, agree_bits)?;
    let oracle = match &lim.oracle_root {
        Some(r) => Some(r.clone()),
        None => oracle::real_root(prob.coeffs(), c.precision_bits + 32)?,
    };
    let oracle = oracle.map(|r| r.to_interval());
    let report = ConvergenceReport::build(&lim.history, oracle.as_ref(), c.precision_bits, None);
    let status = if lim.converged {
        Status::Converged
    } else {
        Status::Unconverged
    };
    Ok(emit(to_value(&prob), "general_polynomial_matrix", &report, status, Some(to_value(&lim)), c.format))
}

fn poly_scan(
    coeffs: &[BigInt],
    k_range: std::ops::RangeInclusive<i64>,
    l_range: std::ops::RangeInclusive<i64>,
    budget: ScanBudget,
    format: Format,
) -> Res<RunOutput> {
    let cells = polyroot::parameter_scan(coeffs, k_range, l_range, budget)?;
    let any = cells.iter().any(|c| c.outcome == Outcome::Converged);
    let status = if any { Status::Converged } else { Status::Unconverged };
    let text = match format {
        Format::Json => {
            let v = json!({
                "problem": { "coeffs": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>() },
                "method": "parameter_scan",
                "budget": to_value(&budget),
                "cells": to_value(&cells),
                "status": to_value(&status),
            });
            let mut s = serde_json::to_string_pretty(&v).expect("scan serializes");
            s.push('\n');
            s
        }
        Format::Csv | Format::Text => {
            let sep = if format == Format::Csv { "," } else { "  " };
            let mut s = String::new();
            writeln!(s, "{}", ["k", "l", "outcome", "n", "root", "residual"].join(sep)).unwrap();
            for cell in &cells {
                let outcome = to_value(&cell.outcome);
                let root = cell
                    .limit
                    .root()
                    .map(|r| crate::exactnum::rational_to_decimal(r, 10))
                    .unwrap_or_default();
                let fields = [
                    cell.k.to_string(),
                    cell.l.to_string(),
                    outcome.as_str().unwrap_or_default().to_string(),
                    cell.limit.n.to_string(),
                    root,
                    fmt_sci(&cell.limit.residual),
                ];
                writeln!(s, "{}", fields.join(sep)).unwrap();
            }
            s
        }
    };
    Ok(RunOutput::ok(status_code(status), text))
}
