//! Dense univariate polynomials with real coefficients.
//!
//! Coefficients are stored in ascending order: `coeffs()[j]` multiplies
//! `x^j`. Trailing zeros are trimmed on construction so the leading stored
//! coefficient is nonzero, except for the zero polynomial which is kept as a
//! single zero entry.

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance used when matching a non-real root with its conjugate partner.
pub const CONJUGATE_PAIR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("root {0} has no conjugate partner within {CONJUGATE_PAIR_TOL:e}")]
    UnpairedComplexRoot(Complex64),
    #[error("symmetric function order {order} out of range for {count} roots")]
    IndexOutOfRange { order: usize, count: usize },
    #[error("excluded root position {index} out of range for {count} roots")]
    BadIndex { index: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros. An empty or all-zero vector yields the zero polynomial.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![0.0] }
    }

    #[inline]
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree of the polynomial. The zero polynomial reports degree 0.
    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs == [0.0]
    }

    #[inline]
    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("coeffs is never empty")
    }

    /// Evaluates at `x` by Horner's rule.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Evaluates at a complex point by Horner's rule.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| j as f64 * c)
            .collect();
        Polynomial::new(d)
    }

    /// Coefficientwise sum. Used for padding a split with extra mass.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (j, slot) in out.iter_mut().enumerate() {
            *slot = self.coeffs.get(j).copied().unwrap_or(0.0)
                + other.coeffs.get(j).copied().unwrap_or(0.0);
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&a| a * c).collect())
    }

    /// Returns `g` with `g(x) = f(x + s)`, computed by repeated synthetic
    /// division. The double loop is O(n^2) but avoids the binomial
    /// convolution, which loses accuracy much earlier as the degree grows.
    pub fn taylor_shift(&self, s: f64) -> Polynomial {
        let mut g = self.coeffs.clone();
        let n = g.len() - 1;
        for j in 0..n {
            for i in (j..n).rev() {
                g[i] += s * g[i + 1];
            }
        }
        Polynomial::new(g)
    }

    /// Monic product of `(x - r)` over the given roots.
    ///
    /// Non-real roots must come in conjugate pairs: each root with positive
    /// imaginary part is matched to the nearest unused root within
    /// [`CONJUGATE_PAIR_TOL`] of its exact conjugate, and the pair is
    /// symmetrized before multiplying so the quadratic factor is exactly
    /// real. Roots with `|im| <= CONJUGATE_PAIR_TOL` are treated as real.
    pub fn from_roots(roots: &[Complex64]) -> Result<Polynomial, PolyError> {
        let mut used = vec![false; roots.len()];
        // Ascending complex coefficients of each linear or quadratic factor.
        let mut factors: Vec<Vec<Complex64>> = Vec::new();
        for i in 0..roots.len() {
            if used[i] {
                continue;
            }
            let z = roots[i];
            used[i] = true;
            if z.im.abs() <= CONJUGATE_PAIR_TOL {
                factors.push(vec![Complex64::new(-z.re, 0.0), Complex64::new(1.0, 0.0)]);
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for (j, w) in roots.iter().enumerate().skip(i + 1) {
                if used[j] {
                    continue;
                }
                let d = (w - z.conj()).norm();
                if d <= CONJUGATE_PAIR_TOL && best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((j, d));
                }
            }
            let (j, _) = best.ok_or(PolyError::UnpairedComplexRoot(z))?;
            used[j] = true;
            let zc = (z + roots[j].conj()) * 0.5;
            // (x - zc)(x - conj(zc)) = x^2 - 2 Re(zc) x + |zc|^2
            factors.push(vec![
                Complex64::new(zc.norm_sqr(), 0.0),
                Complex64::new(-2.0 * zc.re, 0.0),
                Complex64::new(1.0, 0.0),
            ]);
        }

        let mut acc = vec![Complex64::new(1.0, 0.0)];
        for f in &factors {
            acc = convolve(&acc, f);
        }
        let residue = acc.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        debug_assert!(residue <= CONJUGATE_PAIR_TOL, "imaginary residue {residue}");
        Ok(Polynomial::new(acc.iter().map(|c| c.re).collect()))
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut wrote = false;
        for (j, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 && !(j == 0 && !wrote) {
                continue;
            }
            if wrote {
                write!(f, " {} ", if c < 0.0 { "-" } else { "+" })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            let a = c.abs();
            match j {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1.0 {
                        write!(f, "{a} ")?;
                    }
                    if j == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{j}")?;
                    }
                }
            }
            wrote = true;
        }
        Ok(())
    }
}

fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Elementary symmetric function `e_j` of the roots, via the stable
/// incremental recurrence (fold roots in one at a time, updating in place
/// from high order down).
pub fn esym(roots: &[Complex64], j: usize) -> Result<Complex64, PolyError> {
    let n = roots.len();
    if j > n {
        return Err(PolyError::IndexOutOfRange { order: j, count: n });
    }
    Ok(esym_table(roots)[j])
}

/// Elementary symmetric function of the root list with position `k` removed.
///
/// `order` may be any integer: negative orders and orders above `n - 1`
/// return zero, which keeps the two-term recurrence
/// `e_j(all) = e_j(without k) + r_k * e_{j-1}(without k)` valid at the
/// boundaries without special cases.
pub fn esym_excluding(
    roots: &[Complex64],
    order: i64,
    k: usize,
) -> Result<Complex64, PolyError> {
    let n = roots.len();
    if k >= n {
        return Err(PolyError::BadIndex { index: k, count: n });
    }
    if order < 0 || order > n as i64 - 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let rest: Vec<Complex64> = roots
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, &r)| r)
        .collect();
    Ok(esym_table(&rest)[order as usize])
}

fn esym_table(roots: &[Complex64]) -> Vec<Complex64> {
    let n = roots.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (m, &r) in roots.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            let prev = e[k - 1];
            e[k] += r * prev;
        }
    }
    e
}
