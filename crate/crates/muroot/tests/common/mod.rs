//! Shared instance generator for the randomized suites.
//!
//! Builds polynomials from known root sets so tests can check the solver
//! against ground truth: every root has nonnegative real part, at least one
//! real root exists, all roots are simple with a guaranteed pairwise
//! separation, and the local convergence rate at every real root is kept
//! away from 1 so runs finish inside a predictable iteration budget.

use muroot::mu::rate_at_root;
use muroot::poly::Polynomial;
use muroot::split::{split_signs, PQSplit};
use muroot::Complex64;
use rand::Rng;

/// Minimum pairwise distance between sampled roots.
const MIN_SEPARATION: f64 = 0.05;

/// Real roots closer than this to each other make brackets too thin to
/// sample interior points from comfortably.
const MIN_REAL_GAP: f64 = 0.3;

/// Instances whose rate at some real root exceeds this are resampled; the
/// iteration budget in the tests is sized against it.
pub const MAX_RATE: f64 = 1.0 - 1e-4;

pub struct SampledInstance {
    pub poly: Polynomial,
    pub split: PQSplit,
    /// All constructed roots (conjugate closed).
    pub roots: Vec<Complex64>,
    /// The real ones, ascending. Always at least one.
    pub real_roots: Vec<f64>,
}

pub fn sample_instance<R: Rng>(rng: &mut R) -> SampledInstance {
    'resample: loop {
        let degree = rng.gen_range(2..=8usize);
        let mut n_real = rng.gen_range(1..=degree);
        if (degree - n_real) % 2 == 1 {
            n_real += 1;
        }
        if n_real > degree {
            continue 'resample;
        }
        let n_pairs = (degree - n_real) / 2;

        let mut real_roots: Vec<f64> = Vec::new();
        for _ in 0..n_real {
            let mut placed = false;
            for _ in 0..60 {
                let r = rng.gen_range(0.3..3.2);
                if real_roots.iter().all(|&e| (e - r).abs() >= MIN_REAL_GAP) {
                    real_roots.push(r);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'resample;
            }
        }
        real_roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut roots: Vec<Complex64> =
            real_roots.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        for _ in 0..n_pairs {
            let mut placed = false;
            for _ in 0..60 {
                let z = Complex64::new(rng.gen_range(0.0..3.0), rng.gen_range(0.2..2.0));
                let far_enough = roots
                    .iter()
                    .all(|&w| (z - w).norm() >= MIN_SEPARATION && (z.conj() - w).norm() >= MIN_SEPARATION);
                if far_enough {
                    roots.push(z);
                    roots.push(z.conj());
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'resample;
            }
        }

        let poly = Polynomial::from_roots(&roots).expect("constructed roots are paired");
        let Ok(split) = split_signs(&poly) else {
            continue 'resample;
        };
        let rates_ok = real_roots
            .iter()
            .all(|&r| matches!(rate_at_root(&split, r), Ok(rate) if rate <= MAX_RATE));
        if !rates_ok {
            continue 'resample;
        }

        return SampledInstance {
            poly,
            split,
            roots,
            real_roots,
        };
    }
}

/// Picks a bracket index `k` in `0..=m` uniformly and an interior starting
/// point for it, keeping a 25% margin from both ends (the open bracket
/// above the largest root gets a finite sampling window).
pub fn sample_start<R: Rng>(rng: &mut R, real_roots: &[f64]) -> (f64, usize) {
    let m = real_roots.len();
    let k = rng.gen_range(0..=m);
    let (lo, hi) = if k == 0 {
        (0.0, real_roots[0])
    } else if k == m {
        (real_roots[m - 1], real_roots[m - 1] + 1.5)
    } else {
        (real_roots[k - 1], real_roots[k])
    };
    let x0 = lo + (hi - lo) * rng.gen_range(0.25..0.75);
    (x0, k)
}
