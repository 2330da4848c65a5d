//! Splitting `f` into a difference `p - q` of nonnegative parts.
//!
//! When every root of `f` has nonnegative real part, the coefficients of the
//! monic form alternate in sign, so routing positive coefficients to `p` and
//! negated negative ones to `q` yields two polynomials with nonnegative
//! coefficients whose difference reproduces `f` term by term. The split is
//! pure sign routing: no arithmetic is performed on the coefficients, so the
//! reconstruction `p - q` is exact.

use crate::poly::Polynomial;
use num_complex::Complex64;
use thiserror::Error;

/// Slack applied to real parts when deciding whether a root set satisfies
/// the right-half-plane requirement.
pub const REAL_PART_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SplitError {
    #[error("polynomial does not split: one side of p - q would be identically zero")]
    DegenerateSplit,
    #[error("padding coefficient {value} at x^{index} is negative")]
    NegativePadding { index: usize, value: f64 },
}

/// A decomposition `f = p - q` where both parts have only nonnegative
/// coefficients and neither is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PQSplit {
    p: Polynomial,
    q: Polynomial,
}

impl PQSplit {
    #[inline]
    pub fn p(&self) -> &Polynomial {
        &self.p
    }

    #[inline]
    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    /// The reconstructed difference `p - q`.
    pub fn difference(&self) -> Polynomial {
        self.p.add(&self.q.scale(-1.0))
    }
}

/// Splits `f` by coefficient sign. The polynomial is normalized to be monic
/// first (the update ratios only depend on `p/q`, so a positive scale is
/// harmless, and a negative leading coefficient would otherwise swap the
/// roles of the two parts).
pub fn split_signs(f: &Polynomial) -> Result<PQSplit, SplitError> {
    if f.is_zero() {
        return Err(SplitError::DegenerateSplit);
    }
    let monic = if f.leading() == 1.0 {
        f.clone()
    } else {
        f.scale(1.0 / f.leading())
    };
    let mut p = vec![0.0; monic.coeffs().len()];
    let mut q = vec![0.0; monic.coeffs().len()];
    for (j, &c) in monic.coeffs().iter().enumerate() {
        if c > 0.0 {
            p[j] = c;
        } else if c < 0.0 {
            q[j] = -c;
        }
    }
    let p = Polynomial::new(p);
    let q = Polynomial::new(q);
    if p.is_zero() || q.is_zero() {
        return Err(SplitError::DegenerateSplit);
    }
    Ok(PQSplit { p, q })
}

/// Adds the same nonnegative polynomial to both sides of a split, leaving
/// the difference unchanged. Extra mass slows the iteration down (the update
/// ratio moves toward 1), which is occasionally useful for damping.
pub fn pad_split(s: &PQSplit, d: &Polynomial) -> Result<PQSplit, SplitError> {
    for (index, &value) in d.coeffs().iter().enumerate() {
        if value < 0.0 {
            return Err(SplitError::NegativePadding { index, value });
        }
    }
    Ok(PQSplit {
        p: s.p.add(d),
        q: s.q.add(d),
    })
}

/// True when the coefficients alternate in sign from the leading term down,
/// zeros allowed. The sign pattern is checked after normalizing the leading
/// coefficient to be positive.
pub fn check_alternating(f: &Polynomial) -> bool {
    if f.is_zero() {
        return false;
    }
    let flip = if f.leading() < 0.0 { -1.0 } else { 1.0 };
    let n = f.degree();
    f.coeffs().iter().enumerate().all(|(j, &c)| {
        let c = c * flip;
        if (n - j) % 2 == 0 {
            c >= 0.0
        } else {
            c <= 0.0
        }
    })
}

/// Verdict on whether a root set keeps the iteration's bracket structure:
/// every root must lie in the closed right half plane and at least one must
/// lie strictly inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct AssumptionReport {
    pub satisfied: bool,
    pub roots: Vec<Complex64>,
    pub min_real_part: f64,
    pub max_real_part: f64,
    pub alternating_signs: bool,
}

/// Checks the root-location requirement against an externally computed root
/// set, with `tol` of slack on the real parts ([`REAL_PART_TOL`] is the
/// usual choice).
pub fn verify_assumption(f: &Polynomial, roots: &[Complex64], tol: f64) -> AssumptionReport {
    let mut min_real_part = f64::NAN;
    let mut max_real_part = f64::NAN;
    for r in roots {
        min_real_part = min_real_part.min(r.re);
        max_real_part = max_real_part.max(r.re);
    }
    let satisfied = !roots.is_empty() && min_real_part >= -tol && max_real_part > tol;
    AssumptionReport {
        satisfied,
        roots: roots.to_vec(),
        min_real_part,
        max_real_part,
        alternating_signs: check_alternating(f),
    }
}
