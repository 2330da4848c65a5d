//! Report documents and their serialized forms.
//!
//! Every float is rendered as a fixed 17-significant-digit scientific
//! literal so identical inputs always produce byte-identical output. JSON
//! keys follow the struct order below; non-finite values become `null` in
//! JSON and `inf`/`NaN` cells in CSV.

use muroot::mu::{BracketLimit, BracketResult, IterationTrace, RateEstimate, TraceStatus};
use muroot::Complex64;
use serde::Serialize;
use serde_json::value::RawValue;

pub type Num = Box<RawValue>;

pub fn num(v: f64) -> Num {
    let text = if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("fixed-format float is valid JSON")
}

pub fn nums(vs: impl IntoIterator<Item = f64>) -> Vec<Num> {
    vs.into_iter().map(num).collect()
}

/// CSV cell for a float; unlike JSON this keeps `inf` and `NaN` spellings.
pub fn cell(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Serialize)]
pub struct SolveDoc {
    pub input: SolveInputDoc,
    pub bracket: BracketDoc,
    pub traces: TracesDoc,
    pub rates: RatesDoc,
    pub oracle: OracleDoc,
}

#[derive(Serialize)]
pub struct SolveInputDoc {
    pub command: &'static str,
    pub polynomial: String,
    pub coeffs: Vec<Num>,
    pub x0: Num,
    pub x_tol: Num,
    pub f_tol: Num,
    pub max_iters: u64,
}

#[derive(Serialize)]
pub struct BracketDoc {
    pub lower: LimitDoc,
    pub upper: LimitDoc,
}

#[derive(Serialize)]
pub struct LimitDoc {
    pub kind: &'static str,
    pub value: Option<Num>,
}

impl LimitDoc {
    pub fn from_limit(limit: &BracketLimit) -> Self {
        match limit {
            BracketLimit::Root(r) => LimitDoc {
                kind: "ROOT",
                value: Some(num(*r)),
            },
            BracketLimit::Zero => LimitDoc {
                kind: "ZERO",
                value: None,
            },
            BracketLimit::Infinity => LimitDoc {
                kind: "INFINITY",
                value: None,
            },
            BracketLimit::Unresolved(x) => LimitDoc {
                kind: "UNRESOLVED",
                value: Some(num(*x)),
            },
        }
    }
}

#[derive(Serialize)]
pub struct TracesDoc {
    pub down: TraceDoc,
    pub up: TraceDoc,
}

#[derive(Serialize)]
pub struct TraceDoc {
    pub status: &'static str,
    pub iterates: Vec<Num>,
    pub residuals: Vec<Num>,
    /// Distances to the reference limit, when one exists.
    pub abs_errors: Option<Vec<Num>>,
}

pub fn status_label(status: TraceStatus) -> &'static str {
    match status {
        TraceStatus::Converged => "CONVERGED",
        TraceStatus::FixedPoint => "FIXED_POINT",
        TraceStatus::HitZero => "HIT_ZERO",
        TraceStatus::Diverged => "DIVERGED",
        TraceStatus::MaxIters => "MAX_ITERS",
    }
}

impl TraceDoc {
    pub fn from_trace(trace: &IterationTrace, reference: Option<f64>) -> Self {
        TraceDoc {
            status: status_label(trace.status),
            iterates: nums(trace.iterates.iter().copied()),
            residuals: nums(trace.residuals.iter().copied()),
            abs_errors: reference
                .map(|r| nums(trace.iterates.iter().map(|x| (x - r).abs()))),
        }
    }
}

#[derive(Serialize)]
pub struct RatesDoc {
    pub lower: Option<RateDoc>,
    pub upper: Option<RateDoc>,
}

#[derive(Serialize)]
pub struct RateDoc {
    pub theoretical: Num,
    pub empirical: Option<Num>,
    pub iterations_per_digit: Option<Num>,
    pub multiple_root_suspected: bool,
}

impl RateDoc {
    pub fn from_estimate(est: &RateEstimate, empirical: Option<f64>) -> Self {
        let per_digit = if est.rate > 0.0 && est.rate < 1.0 {
            Some(num(0.1f64.ln() / est.rate.ln()))
        } else {
            None
        };
        RateDoc {
            theoretical: num(est.rate),
            empirical: empirical.map(num),
            iterations_per_digit: per_digit,
            multiple_root_suspected: est.multiple_root_suspected,
        }
    }
}

#[derive(Serialize)]
pub struct OracleDoc {
    pub real_roots: Vec<Num>,
    pub all_roots: Vec<ComplexDoc>,
    pub residual_max: Num,
    pub assumption_satisfied: bool,
    /// Distance from each finite limit to the nearest refined oracle root.
    pub agreement: AgreementDoc,
}

#[derive(Serialize)]
pub struct ComplexDoc {
    pub re: Num,
    pub im: Num,
}

pub fn complex_doc(z: Complex64) -> ComplexDoc {
    ComplexDoc {
        re: num(z.re),
        im: num(z.im),
    }
}

#[derive(Serialize)]
pub struct AgreementDoc {
    pub lower: Option<Num>,
    pub upper: Option<Num>,
}

#[derive(Serialize)]
pub struct RootsDoc {
    pub input: RootsInputDoc,
    pub roots: RootListDoc,
    pub assumption: AssumptionDoc,
}

#[derive(Serialize)]
pub struct RootsInputDoc {
    pub command: &'static str,
    pub polynomial: String,
    pub coeffs: Vec<Num>,
}

#[derive(Serialize)]
pub struct RootListDoc {
    pub all: Vec<ComplexDoc>,
    pub real: Vec<Num>,
    pub residual_max: Num,
}

#[derive(Serialize)]
pub struct AssumptionDoc {
    pub satisfied: bool,
    pub min_real_part: Num,
    pub max_real_part: Num,
    pub alternating_signs: bool,
}

/// Iterate rows with signed step indices: `t <= 0` walks the down trace
/// out from the shared start, `t >= 0` the up trace; the `t = 0` row is the
/// start itself, written once and measured against the lower reference.
pub fn trace_csv(
    result: &BracketResult,
    lower_ref: Option<f64>,
    upper_ref: Option<f64>,
) -> String {
    let mut out = String::from("t,x_t,f_x_t,abs_error_vs_limit,log10_error\n");
    let down = &result.trace_down;
    let up = &result.trace_up;
    for i in (1..down.iterates.len()).rev() {
        push_row(&mut out, -(i as i64), down, i, lower_ref);
    }
    push_row(&mut out, 0, down, 0, lower_ref);
    for i in 1..up.iterates.len() {
        push_row(&mut out, i as i64, up, i, upper_ref);
    }
    out
}

fn push_row(out: &mut String, t: i64, trace: &IterationTrace, i: usize, reference: Option<f64>) {
    let x = trace.iterates[i];
    let f = trace.residuals[i];
    let err = match reference {
        Some(r) => (x - r).abs(),
        None => f64::NAN,
    };
    out.push_str(&format!(
        "{t},{},{},{},{}\n",
        cell(x),
        cell(f),
        cell(err),
        cell(err.log10())
    ));
}

/// One row per usable shift: `shift,rate,valid,iters_per_digit`.
pub fn shift_scan_csv(points: &[muroot::mu::ShiftRatePoint]) -> String {
    let mut out = String::from("shift,rate,valid,iters_per_digit\n");
    for point in points {
        let per_digit = if point.rate <= 0.0 {
            0.0
        } else if point.rate >= 1.0 {
            f64::INFINITY
        } else {
            0.1f64.ln() / point.rate.ln()
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            cell(point.shift),
            cell(point.rate),
            point.valid,
            cell(per_digit)
        ));
    }
    out
}
