//! The multiplicative update iteration.
//!
//! Given a split `f = p - q` with nonnegative coefficients and a starting
//! point `x0 > 0`, each step multiplies the iterate by `p(x)/q(x)` or its
//! reciprocal. Both ratios equal 1 exactly at the roots of `f`, so roots are
//! fixed points; between two adjacent nonnegative real roots the ratio is
//! bounded on one side of 1, which makes the sequence monotone, trapped in
//! the bracket, and convergent to one of its ends. Below the smallest
//! positive root the decreasing sequence collapses to zero and above the
//! largest it blows up, both reported as sentinel outcomes rather than
//! roots.

use crate::poly::Polynomial;
use crate::split::{split_signs, PQSplit, SplitError, REAL_PART_TOL};
use num_complex::Complex64;
use thiserror::Error;

/// Residual gate for treating a point as a root when evaluating the local
/// convergence rate: `|p(a) - q(a)| <= ROOT_RESIDUAL_TOL * max(1, q(a))`.
///
/// Limits produced by the iteration under the default tolerances land within
/// about `x_tol / (1 - rate)` of the true root, which leaves residuals far
/// above `f_tol` for rates near 1. The gate is sized to accept those limits
/// while still rejecting any point a meaningful fraction of a bracket away
/// from a root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-6;

/// Rates above this are reported as 1.0 with
/// [`RateEstimate::multiple_root_suspected`] set: a simple root this slow is
/// indistinguishable from a multiple root at working precision.
pub const MULTIPLE_ROOT_RATE: f64 = 1.0 - 1e-6;

/// Number of trailing steps used for the empirical rate estimate.
pub const RATE_WINDOW: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// Why a sequence stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    /// Step or residual tolerance met at a finite positive limit.
    Converged,
    /// The iterate fell below [`SolveConfig::zero_threshold`]: the sequence
    /// is collapsing toward the zero sentinel.
    HitZero,
    /// The iterate exceeded [`SolveConfig::divergence_threshold`]: the
    /// sequence is running off to the infinity sentinel.
    Diverged,
    /// Iteration budget exhausted with no verdict.
    MaxIters,
    /// The starting point already satisfied the residual tolerance.
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub iterates: Vec<f64>,
    /// `f(x_t) = p(x_t) - q(x_t)` for each iterate.
    pub residuals: Vec<f64>,
    pub direction: Direction,
    pub status: TraceStatus,
}

impl IterationTrace {
    pub fn final_iterate(&self) -> f64 {
        *self.iterates.last().expect("trace always holds the start point")
    }
}

/// One end of the bracket around the starting point.
///
/// The sentinels are explicit states: a collapsed or diverged sequence never
/// reports a floating-point 0 or infinity as if it were a root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BracketLimit {
    /// The sequence converged to this value.
    Root(f64),
    /// Sentinel below the smallest positive root. Zero need not be a root
    /// of `f`; it is simply where the decreasing sequence ends up.
    Zero,
    /// Sentinel above the largest real root.
    Infinity,
    /// No verdict within the iteration budget; carries the last iterate.
    Unresolved(f64),
}

impl BracketLimit {
    /// The limit value when the sequence actually converged.
    pub fn root_value(&self) -> Option<f64> {
        match self {
            BracketLimit::Root(v) => Some(*v),
            _ => None,
        }
    }

    pub fn is_sentinel(&self) -> bool {
        matches!(self, BracketLimit::Zero | BracketLimit::Infinity)
    }
}

/// Local linear convergence rate at a root, with the multiple-root escape
/// hatch applied by [`solve_bracket`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub rate: f64,
    pub multiple_root_suspected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BracketResult {
    pub lower_limit: BracketLimit,
    pub upper_limit: BracketLimit,
    pub trace_down: IterationTrace,
    pub trace_up: IterationTrace,
    pub rate_lower: Option<RateEstimate>,
    pub rate_upper: Option<RateEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    /// Relative step tolerance: stop once `|x_{t+1} - x_t| <= x_tol * |x_t|`.
    /// Deliberately relative with no absolute floor, so that a sequence
    /// collapsing toward zero (whose relative steps stay large) is not
    /// mistaken for a converged one.
    pub x_tol: f64,
    /// Absolute residual tolerance on `f(x_t)`.
    pub f_tol: f64,
    pub max_iters: usize,
    pub divergence_threshold: f64,
    pub zero_threshold: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            x_tol: 1e-10,
            f_tol: 1e-12,
            max_iters: 100_000,
            divergence_threshold: 1e12,
            zero_threshold: 1e-300,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MuError {
    #[error("p({x}) = {p} and q({x}) = {q}: the update ratio needs both finite and positive")]
    NonpositiveEvaluation { x: f64, p: f64, q: f64 },
    #[error("starting point {x0} is not positive")]
    NonpositiveStart { x0: f64 },
    #[error("{alpha} is not a root: |p - q| = {residual:e}")]
    NotARoot { alpha: f64, residual: f64 },
    #[error("rate {rate} is outside (0, 1)")]
    DegenerateRate { rate: f64 },
    #[error("trace has no usable tail for a rate estimate ({len} iterates, {status:?})")]
    InsufficientTrace { len: usize, status: TraceStatus },
    #[error("shift {shift} moves the target root to {shifted}, which is not positive")]
    ShiftMakesRootNonpositive { shift: f64, shifted: f64 },
    #[error(transparent)]
    Split(#[from] SplitError),
}

fn checked_eval(s: &PQSplit, x: f64) -> Result<(f64, f64), MuError> {
    let p = s.p().eval(x);
    let q = s.q().eval(x);
    if !(p > 0.0) || !(q > 0.0) || !p.is_finite() || !q.is_finite() {
        return Err(MuError::NonpositiveEvaluation { x, p, q });
    }
    Ok((p, q))
}

#[inline]
fn oriented_step(x: f64, p: f64, q: f64, p_over_q: bool) -> f64 {
    if p_over_q {
        x * (p / q)
    } else {
        x * (q / p)
    }
}

/// One multiplicative update from `x` in the given direction: whichever of
/// `x * p(x)/q(x)` and `x * q(x)/p(x)` moves that way. At a root both
/// ratios are 1 and `x` is returned unchanged.
pub fn mu_step(s: &PQSplit, x: f64, dir: Direction) -> Result<f64, MuError> {
    if !(x > 0.0) {
        return Err(MuError::NonpositiveStart { x0: x });
    }
    let (p, q) = checked_eval(s, x)?;
    let p_over_q = match dir {
        Direction::Up => p >= q,
        Direction::Down => p <= q,
    };
    Ok(oriented_step(x, p, q, p_over_q))
}

/// Runs one monotone sequence from `x0`.
///
/// The ratio orientation is fixed once at the starting point and kept for
/// the whole run. Inside the bracket the two rules agree; the fixed
/// orientation additionally pushes an iterate that rounding has carried a
/// hair past the root back toward it, instead of marching on into the next
/// bracket.
pub fn run_sequence(
    s: &PQSplit,
    x0: f64,
    dir: Direction,
    cfg: &SolveConfig,
) -> Result<IterationTrace, MuError> {
    if !(x0 > 0.0) {
        return Err(MuError::NonpositiveStart { x0 });
    }
    let (p0, q0) = checked_eval(s, x0)?;
    let f0 = p0 - q0;
    let mut iterates = vec![x0];
    let mut residuals = vec![f0];
    if f0.abs() <= cfg.f_tol {
        return Ok(IterationTrace {
            iterates,
            residuals,
            direction: dir,
            status: TraceStatus::FixedPoint,
        });
    }
    let p_over_q = match dir {
        Direction::Up => p0 > q0,
        Direction::Down => p0 < q0,
    };

    let mut x = x0;
    let mut status = TraceStatus::MaxIters;
    for _ in 0..cfg.max_iters {
        let (p, q) = checked_eval(s, x)?;
        let next = oriented_step(x, p, q, p_over_q);
        let fr = s.p().eval(next) - s.q().eval(next);
        iterates.push(next);
        residuals.push(fr);
        if next > cfg.divergence_threshold {
            status = TraceStatus::Diverged;
            break;
        }
        if next < cfg.zero_threshold {
            status = TraceStatus::HitZero;
            break;
        }
        if fr.abs() <= cfg.f_tol || (next - x).abs() <= cfg.x_tol * x.abs() {
            status = TraceStatus::Converged;
            break;
        }
        x = next;
    }
    Ok(IterationTrace {
        iterates,
        residuals,
        direction: dir,
        status,
    })
}

/// Runs both sequences from `x0` and assembles the surrounding bracket.
///
/// Each end is the converged limit, a sentinel for a collapsed or diverged
/// sequence, or [`BracketLimit::Unresolved`] when the budget ran out. For
/// ends that are genuine limits the local rate is attached; rates above
/// [`MULTIPLE_ROOT_RATE`] are reported as 1.0 with the multiple-root flag
/// set.
pub fn solve_bracket(
    s: &PQSplit,
    x0: f64,
    cfg: &SolveConfig,
) -> Result<BracketResult, MuError> {
    let trace_down = run_sequence(s, x0, Direction::Down, cfg)?;
    let trace_up = run_sequence(s, x0, Direction::Up, cfg)?;
    let lower_limit = limit_of(&trace_down);
    let upper_limit = limit_of(&trace_up);
    let rate_lower = rate_estimate(s, &lower_limit);
    let rate_upper = rate_estimate(s, &upper_limit);
    Ok(BracketResult {
        lower_limit,
        upper_limit,
        trace_down,
        trace_up,
        rate_lower,
        rate_upper,
    })
}

fn limit_of(trace: &IterationTrace) -> BracketLimit {
    match trace.status {
        TraceStatus::Converged | TraceStatus::FixedPoint => {
            BracketLimit::Root(trace.final_iterate())
        }
        TraceStatus::HitZero => BracketLimit::Zero,
        TraceStatus::Diverged => BracketLimit::Infinity,
        TraceStatus::MaxIters => BracketLimit::Unresolved(trace.final_iterate()),
    }
}

fn rate_estimate(s: &PQSplit, limit: &BracketLimit) -> Option<RateEstimate> {
    let alpha = limit.root_value()?;
    let rate = rate_at_root(s, alpha).ok()?;
    if rate > MULTIPLE_ROOT_RATE {
        Some(RateEstimate {
            rate: 1.0,
            multiple_root_suspected: true,
        })
    } else {
        Some(RateEstimate {
            rate,
            multiple_root_suspected: false,
        })
    }
}

/// Linear convergence rate of the iteration at a root `alpha > 0`:
/// `1 - alpha * |p'(alpha) - q'(alpha)| / q(alpha)`, clamped to `[0, 1]`.
///
/// The candidate must pass the [`ROOT_RESIDUAL_TOL`] gate; anything farther
/// from a root is rejected as [`MuError::NotARoot`].
pub fn rate_at_root(s: &PQSplit, alpha: f64) -> Result<f64, MuError> {
    let p = s.p().eval(alpha);
    let q = s.q().eval(alpha);
    let residual = (p - q).abs();
    if !(alpha > 0.0) || !(residual <= ROOT_RESIDUAL_TOL * q.abs().max(1.0)) {
        return Err(MuError::NotARoot { alpha, residual });
    }
    if !(q > 0.0) || !q.is_finite() {
        return Err(MuError::NonpositiveEvaluation { x: alpha, p, q });
    }
    let dp = s.p().derivative().eval(alpha);
    let dq = s.q().derivative().eval(alpha);
    let rate = 1.0 - alpha * (dp - dq).abs() / q;
    Ok(rate.clamp(0.0, 1.0))
}

/// How many iterations it takes to gain one decimal digit of accuracy at a
/// linear rate in `(0, 1)`: `ln(0.1) / ln(rate)`.
pub fn iterations_per_digit(rate: f64) -> Result<f64, MuError> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(MuError::DegenerateRate { rate });
    }
    Ok(0.1f64.ln() / rate.ln())
}

/// Observed rate over the trailing [`RATE_WINDOW`] steps of a converged
/// trace: the geometric mean of successive error ratios `e_{t+1} / e_t`
/// against the supplied limit. Steps whose starting error is exactly zero
/// are skipped; a step that lands exactly on the limit drags the mean to
/// zero, which is the right answer for a superlinear tail.
pub fn empirical_rate(trace: &IterationTrace, limit: f64) -> Result<f64, MuError> {
    let len = trace.iterates.len();
    if trace.status != TraceStatus::Converged || len < 2 {
        return Err(MuError::InsufficientTrace {
            len,
            status: trace.status,
        });
    }
    let start = len.saturating_sub(RATE_WINDOW + 1);
    let mut log_sum = 0.0;
    let mut used = 0usize;
    let mut hit_limit_exactly = false;
    for t in start..len - 1 {
        let e0 = (limit - trace.iterates[t]).abs();
        let e1 = (limit - trace.iterates[t + 1]).abs();
        if e0 == 0.0 {
            continue;
        }
        used += 1;
        if e1 == 0.0 {
            hit_limit_exactly = true;
        } else {
            log_sum += (e1 / e0).ln();
        }
    }
    if used == 0 {
        return Err(MuError::InsufficientTrace {
            len,
            status: trace.status,
        });
    }
    if hit_limit_exactly {
        return Ok(0.0);
    }
    Ok((log_sum / used as f64).exp())
}

/// How the rate at a chosen root responds to shifting the whole polynomial
/// left by `s`: recenter with a Taylor shift, re-split, and evaluate the
/// rate at the moved root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRatePoint {
    pub shift: f64,
    pub rate: f64,
    /// Whether every oracle root stays in the closed right half plane after
    /// the shift, i.e. whether the bracket guarantees still apply.
    pub valid: bool,
}

pub fn shift_rate_scan(
    f: &Polynomial,
    target_root: f64,
    shifts: &[f64],
    oracle_roots: &[Complex64],
) -> Result<Vec<ShiftRatePoint>, MuError> {
    let mut out = Vec::with_capacity(shifts.len());
    for &shift in shifts {
        let shifted = target_root - shift;
        if !(shifted > 0.0) {
            return Err(MuError::ShiftMakesRootNonpositive { shift, shifted });
        }
        let g = f.taylor_shift(shift);
        let split = split_signs(&g)?;
        let rate = rate_at_root(&split, shifted)?;
        let valid = oracle_roots.iter().all(|r| r.re - shift >= -REAL_PART_TOL);
        out.push(ShiftRatePoint { shift, rate, valid });
    }
    Ok(out)
}
