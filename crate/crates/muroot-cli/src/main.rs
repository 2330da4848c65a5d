//! `muroot`: bracket the nonnegative real roots of a polynomial with
//! multiplicative updates, list roots with an independent finder, or scan
//! shifts for faster convergence. Reports are JSON, traces and scans CSV.
//!
//! Exit codes: 0 success, 1 input error, 2 non-convergence.

mod parse;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};
use muroot::mu::{
    empirical_rate, shift_rate_scan, solve_bracket, BracketLimit, MuError, SolveConfig,
    TraceStatus,
};
use muroot::oracle::{durand_kerner_roots, refine_real_root_bisection, RootReport};
use muroot::poly::Polynomial;
use muroot::split::{split_signs, verify_assumption, REAL_PART_TOL};
use report::{
    complex_doc, num, nums, shift_scan_csv, trace_csv, AgreementDoc, AssumptionDoc, BracketDoc,
    LimitDoc, OracleDoc, RateDoc, RatesDoc, RootListDoc, RootsDoc, RootsInputDoc, SolveDoc,
    SolveInputDoc, TraceDoc, TracesDoc,
};

const ORACLE_SWEEPS: usize = 500;
const ORACLE_TOL: f64 = 1e-12;
const REFINE_TOL: f64 = 1e-12;

#[derive(Parser)]
#[command(
    name = "muroot",
    version,
    about = "Polynomial root bracketing by multiplicative updates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run both monotone sequences from x0 and report the surrounding bracket
    Solve(SolveArgs),
    /// List all roots with the independent finder and check the sign assumption
    Roots(RootsArgs),
    /// Tabulate the convergence rate at a target root for a grid of shifts
    ShiftScan(ShiftScanArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Coefficients, ascending from the constant term: c0,c1,...,cn
    #[arg(long, value_name = "C0,C1,...", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Roots, comma separated; complex entries as a+bi in conjugate pairs
    #[arg(long, value_name = "R1,R2,...", allow_hyphen_values = true)]
    roots: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Positive starting point for both sequences
    #[arg(long, allow_hyphen_values = true)]
    x0: f64,
    /// Relative step tolerance [default: 1e-10]
    #[arg(long, value_name = "TOL")]
    x_tol: Option<f64>,
    /// Absolute residual tolerance [default: 1e-12]
    #[arg(long, value_name = "TOL")]
    f_tol: Option<f64>,
    /// Iteration budget per direction [default: 100000]
    #[arg(long, value_name = "N")]
    max_iters: Option<usize>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also write the iterate trace as CSV
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct RootsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ShiftScanArgs {
    #[command(flatten)]
    input: InputArgs,
    /// The real root whose rate is scanned
    #[arg(long, allow_hyphen_values = true)]
    target: f64,
    /// Shift grid lo:step:hi, inclusive
    #[arg(long, value_name = "LO:STEP:HI", allow_hyphen_values = true)]
    shifts: String,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Roots(args) => cmd_roots(args),
        Command::ShiftScan(args) => cmd_shift_scan(args),
    };
    match result {
        Ok(code) => exit(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            exit(f.code);
        }
    }
}

fn build_poly(input: &InputArgs) -> Result<Polynomial, Failure> {
    match (&input.coeffs, &input.roots) {
        (Some(text), None) => {
            let coeffs = parse::parse_coeffs(text).map_err(|m| fail(1, m))?;
            Ok(Polynomial::new(coeffs))
        }
        (None, Some(text)) => {
            let roots = parse::parse_roots(text).map_err(|m| fail(1, m))?;
            Polynomial::from_roots(&roots).map_err(|e| fail(1, format!("bad root list: {e}")))
        }
        _ => unreachable!("clap enforces exactly one source"),
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| fail(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_oracle(f: &Polynomial) -> Result<RootReport, Failure> {
    durand_kerner_roots(f, ORACLE_SWEEPS, ORACLE_TOL)
        .map_err(|e| fail(2, format!("oracle root finder failed: {e}")))
}

/// The value a trace's errors are measured against, plus the distance from
/// the claimed limit to it: the nearest oracle root, bisection-refined, for
/// a finite limit; zero for a collapse; nothing for the other outcomes.
fn reference_for(
    f: &Polynomial,
    reals: &[f64],
    limit: &BracketLimit,
) -> (Option<f64>, Option<f64>) {
    match limit {
        BracketLimit::Root(r) => {
            let nearest = reals
                .iter()
                .copied()
                .min_by(|a, b| (a - r).abs().partial_cmp(&(b - r).abs()).unwrap());
            match nearest {
                Some(root) => {
                    let mut w = 0.01f64;
                    for &other in reals {
                        if other != root {
                            w = w.min((other - root).abs() / 2.0);
                        }
                    }
                    let refined = refine_real_root_bisection(f, root - w, root + w, REFINE_TOL)
                        .unwrap_or(root);
                    (Some(refined), Some((r - refined).abs()))
                }
                None => (Some(*r), None),
            }
        }
        BracketLimit::Zero => (Some(0.0), None),
        BracketLimit::Infinity | BracketLimit::Unresolved(_) => (None, None),
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32, Failure> {
    let f = build_poly(&args.input)?;
    if !(args.x0 > 0.0) {
        return Err(fail(1, "x0 must be positive"));
    }
    let mut cfg = SolveConfig::default();
    if let Some(v) = args.x_tol {
        if !(v > 0.0) {
            return Err(fail(1, "x-tol must be positive"));
        }
        cfg.x_tol = v;
    }
    if let Some(v) = args.f_tol {
        if !(v >= 0.0) {
            return Err(fail(1, "f-tol must be nonnegative"));
        }
        cfg.f_tol = v;
    }
    if let Some(v) = args.max_iters {
        if v == 0 {
            return Err(fail(1, "max-iters must be at least 1"));
        }
        cfg.max_iters = v;
    }

    let split = split_signs(&f).map_err(|e| fail(1, format!("cannot split polynomial: {e}")))?;
    let result = match solve_bracket(&split, args.x0, &cfg) {
        Ok(r) => r,
        Err(MuError::NonpositiveStart { .. }) => return Err(fail(1, "x0 must be positive")),
        Err(e) => return Err(fail(2, format!("iteration failed: {e}"))),
    };

    let oracle = run_oracle(&f)?;
    let assumption = verify_assumption(&f, &oracle.all_roots, REAL_PART_TOL);
    let (lower_ref, lower_delta) = reference_for(&f, &oracle.real_roots_sorted, &result.lower_limit);
    let (upper_ref, upper_delta) = reference_for(&f, &oracle.real_roots_sorted, &result.upper_limit);

    let empirical_against = |trace, reference: Option<f64>| {
        reference.and_then(|r| empirical_rate(trace, r).ok())
    };
    let emp_lower = empirical_against(&result.trace_down, lower_ref);
    let emp_upper = empirical_against(&result.trace_up, upper_ref);

    let doc = SolveDoc {
        input: SolveInputDoc {
            command: "solve",
            polynomial: f.to_string(),
            coeffs: nums(f.coeffs().iter().copied()),
            x0: num(args.x0),
            x_tol: num(cfg.x_tol),
            f_tol: num(cfg.f_tol),
            max_iters: cfg.max_iters as u64,
        },
        bracket: BracketDoc {
            lower: LimitDoc::from_limit(&result.lower_limit),
            upper: LimitDoc::from_limit(&result.upper_limit),
        },
        traces: TracesDoc {
            down: TraceDoc::from_trace(&result.trace_down, lower_ref),
            up: TraceDoc::from_trace(&result.trace_up, upper_ref),
        },
        rates: RatesDoc {
            lower: result
                .rate_lower
                .as_ref()
                .map(|est| RateDoc::from_estimate(est, emp_lower)),
            upper: result
                .rate_upper
                .as_ref()
                .map(|est| RateDoc::from_estimate(est, emp_upper)),
        },
        oracle: OracleDoc {
            real_roots: nums(oracle.real_roots_sorted.iter().copied()),
            all_roots: oracle.all_roots.iter().copied().map(complex_doc).collect(),
            residual_max: num(oracle.residual_max),
            assumption_satisfied: assumption.satisfied,
            agreement: AgreementDoc {
                lower: lower_delta.map(num),
                upper: upper_delta.map(num),
            },
        },
    };
    let json = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    emit(args.out.as_ref(), &json)?;
    if let Some(path) = &args.trace {
        let csv = trace_csv(&result, lower_ref, upper_ref);
        fs::write(path, csv).map_err(|e| fail(1, format!("cannot write {}: {e}", path.display())))?;
    }

    let exhausted = [&result.trace_down, &result.trace_up]
        .iter()
        .any(|t| t.status == TraceStatus::MaxIters);
    Ok(if exhausted { 2 } else { 0 })
}

fn cmd_roots(args: RootsArgs) -> Result<i32, Failure> {
    let f = build_poly(&args.input)?;
    let oracle = run_oracle(&f)?;
    let assumption = verify_assumption(&f, &oracle.all_roots, REAL_PART_TOL);
    let doc = RootsDoc {
        input: RootsInputDoc {
            command: "roots",
            polynomial: f.to_string(),
            coeffs: nums(f.coeffs().iter().copied()),
        },
        roots: RootListDoc {
            all: oracle.all_roots.iter().copied().map(complex_doc).collect(),
            real: nums(oracle.real_roots_sorted.iter().copied()),
            residual_max: num(oracle.residual_max),
        },
        assumption: AssumptionDoc {
            satisfied: assumption.satisfied,
            min_real_part: num(assumption.min_real_part),
            max_real_part: num(assumption.max_real_part),
            alternating_signs: assumption.alternating_signs,
        },
    };
    let json = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    emit(args.out.as_ref(), &json)?;
    Ok(0)
}

fn cmd_shift_scan(args: ShiftScanArgs) -> Result<i32, Failure> {
    let f = build_poly(&args.input)?;
    let grid = parse::parse_shift_grid(&args.shifts).map_err(|m| fail(1, m))?;
    let oracle = run_oracle(&f)?;

    let mut usable = Vec::new();
    for s in grid {
        if args.target - s > 0.0 {
            usable.push(s);
        } else {
            eprintln!("omitting shift {s}: it moves the target root to {}", args.target - s);
        }
    }
    let points = match shift_rate_scan(&f, args.target, &usable, &oracle.all_roots) {
        Ok(points) => points,
        Err(e @ MuError::NotARoot { .. }) => {
            return Err(fail(1, format!("target must be a root of the polynomial: {e}")))
        }
        Err(e) => return Err(fail(1, format!("scan failed: {e}"))),
    };
    emit(args.out.as_ref(), &shift_scan_csv(&points))?;
    Ok(0)
}
