//! Independent cross-checks for the multiplicative update results.
//!
//! The solver in [`crate::mu`] only ever sees the `p`/`q` split, so the
//! checks here deliberately use a different algorithm family: a
//! Durand-Kerner simultaneous iteration for the full complex root set, plus
//! plain bisection for refining real roots. Agreement between the two paths
//! is the main end-to-end test of the solver.

use crate::poly::Polynomial;
use num_complex::Complex64;
use thiserror::Error;

/// Roots with imaginary part below this are treated as real.
pub const IM_TOL: f64 = 1e-7;

/// Converged roots closer than this are merged into one cluster and
/// reported with multiplicity.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Reals above this floor count as nonnegative (absorbs rounding on roots
/// that sit at zero).
pub const REAL_FLOOR: f64 = -1e-9;

/// A starting point within this distance of a listed root is treated as
/// sitting exactly on it.
pub const ROOT_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("root iteration did not settle in {max_iters} sweeps (last max step {last_step:e})")]
    NoConvergence { max_iters: usize, last_step: f64 },
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("starting point {x0} is not positive")]
    NonpositiveStart { x0: f64 },
}

/// Full root set of a polynomial as seen by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct RootReport {
    /// Every complex root, with multiplicity, sorted by real then imaginary
    /// part. Length equals the degree.
    pub all_roots: Vec<Complex64>,
    /// The nonnegative real roots in ascending order. These are the bracket
    /// ends the iteration can converge to.
    pub real_roots_sorted: Vec<f64>,
    /// `max |f(r)|` over `all_roots`.
    pub residual_max: f64,
}

/// Finds all complex roots by Durand-Kerner iteration from the staggered
/// starting points `(0.4 + 0.9i)^k`, then polishes real candidates with one
/// Newton pass and merges clusters tighter than [`CLUSTER_TOL`]. The sweep
/// stops once every update is below `tol` relative to the guess magnitude.
pub fn durand_kerner_roots(
    f: &Polynomial,
    max_iters: usize,
    tol: f64,
) -> Result<RootReport, OracleError> {
    let n = f.degree();
    if n == 0 || f.is_zero() {
        return Ok(RootReport {
            all_roots: Vec::new(),
            real_roots_sorted: Vec::new(),
            residual_max: 0.0,
        });
    }
    let monic = f.scale(1.0 / f.leading());

    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32)).collect();

    let mut last_step = f64::INFINITY;
    let mut settled = false;
    for _ in 0..max_iters {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // Two guesses collided; nudge this one off the pile.
                let nudge = Complex64::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += nudge;
                max_step = f64::INFINITY;
                continue;
            }
            let w = monic.eval_complex(z[i]) / denom;
            z[i] -= w;
            // Relative to the guess, so the stop test is scale-free and a
            // rounding plateau slightly above `tol` still counts as settled.
            max_step = max_step.max(w.norm() / (1.0 + z[i].norm()));
        }
        if !z.iter().all(|zi| zi.re.is_finite() && zi.im.is_finite()) {
            return Err(OracleError::NoConvergence {
                max_iters,
                last_step: f64::INFINITY,
            });
        }
        last_step = max_step;
        if max_step <= tol {
            settled = true;
            break;
        }
    }
    if !settled {
        return Err(OracleError::NoConvergence { max_iters, last_step });
    }

    merge_clusters(&mut z);

    // Real candidates get one Newton pass on the original polynomial.
    let df = f.derivative();
    for zi in z.iter_mut() {
        if zi.im.abs() < IM_TOL {
            let mut r = zi.re;
            let slope = df.eval(r);
            if slope != 0.0 {
                let polished = r - f.eval(r) / slope;
                if polished.is_finite() {
                    r = polished;
                }
            }
            *zi = Complex64::new(r, 0.0);
        }
    }

    z.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite roots"));

    let mut real_roots_sorted: Vec<f64> = z
        .iter()
        .filter(|zi| zi.im == 0.0 && zi.re > REAL_FLOOR)
        .map(|zi| zi.re)
        .collect();
    real_roots_sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));

    let residual_max = z
        .iter()
        .map(|&zi| f.eval_complex(zi).norm())
        .fold(0.0, f64::max);

    Ok(RootReport {
        all_roots: z,
        real_roots_sorted,
        residual_max,
    })
}

/// Replaces every group of roots within [`CLUSTER_TOL`] of each other by
/// the group mean, keeping multiplicity.
fn merge_clusters(z: &mut [Complex64]) {
    let n = z.len();
    let mut assigned = vec![false; n];
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        // Grow the cluster transitively from i.
        let mut members = vec![i];
        assigned[i] = true;
        let mut cursor = 0;
        while cursor < members.len() {
            let a = z[members[cursor]];
            for j in 0..n {
                if !assigned[j] && (z[j] - a).norm() <= CLUSTER_TOL {
                    assigned[j] = true;
                    members.push(j);
                }
            }
            cursor += 1;
        }
        if members.len() > 1 {
            let mean = members.iter().map(|&j| z[j]).sum::<Complex64>()
                / members.len() as f64;
            for &j in &members {
                z[j] = mean;
            }
        }
    }
}

/// Index `k` of the bracket `[r_k, r_{k+1}]` that contains `x0`, where the
/// listed nonnegative real roots are `r_1 <= ... <= r_m` and the ends are
/// padded with the sentinels `r_0 = 0` and `r_{m+1} = infinity`. A start
/// within [`ROOT_MATCH_TOL`] of a root returns that root's own index.
pub fn bracket_index(real_roots_sorted: &[f64], x0: f64) -> Result<usize, OracleError> {
    if !(x0 > 0.0) {
        return Err(OracleError::NonpositiveStart { x0 });
    }
    for (j, &r) in real_roots_sorted.iter().enumerate() {
        if (x0 - r).abs() <= ROOT_MATCH_TOL {
            return Ok(j + 1);
        }
    }
    Ok(real_roots_sorted.iter().filter(|&&r| r < x0).count())
}

/// Plain bisection to width `tol` on an interval where `f` changes sign.
pub fn refine_real_root_bisection(
    f: &Polynomial,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, OracleError> {
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f.eval(lo);
    let f_hi = f.eval(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(OracleError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f.eval(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
