//! Bracketed root finding for real polynomials via monotone multiplicative
//! updates.
//!
//! A polynomial `f` whose roots all lie in the closed right half plane can be
//! written as a difference `f = p - q` of two polynomials with nonnegative
//! coefficients. Iterating `x <- x * p(x) / q(x)` (or the reciprocal ratio)
//! from a positive starting point produces a monotone sequence that stays
//! inside the bracket formed by the adjacent nonnegative real roots and
//! converges to one of its ends. The [`mu`] module implements that iteration,
//! [`split`] builds the `p`/`q` decomposition, [`poly`] supplies the
//! polynomial arithmetic, and [`oracle`] provides an independent
//! Durand-Kerner root finder used for cross-checking.

pub mod mu;
pub mod oracle;
pub mod poly;
pub mod split;

pub use num_complex::Complex64;
