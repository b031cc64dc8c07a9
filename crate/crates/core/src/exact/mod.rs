//! Exact scalars, polynomials, truncated series and root splitting.

pub mod mpoly;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;

pub use mpoly::MPoly;
pub use poly::{format_poly, Poly};
pub use roots::{quadratic_roots, split_roots, RootSplit};
pub use scalar::{
    field_label, fmt_rational, int, parse_rational, rat, sqrt_detect, squarefree_part, Field, QuadExt, Rational, Scalar,
};
pub use series::{factorial, pochhammer, series_binomial_pow, Series};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("radicand {0} is not a squarefree integer other than 0 and 1")]
    BadRadicand(i64),
    #[error("values from Q(sqrt {0}) and Q(sqrt {1}) cannot be combined")]
    MixedField(i64, i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("squarefree part of {0} could not be certified")]
    Squarefree(String),
    #[error("radicand does not fit in 64 bits")]
    RadicandTooLarge,
    #[error("polynomial is not quadratic")]
    NotQuadratic,
    #[error("quadratic splits over Q")]
    NotIrreducible,
}

/// Exact square root in ℚ(√d): returns s with s² = x when one exists.
pub fn sqrt_detect_quad(x: &QuadExt) -> Option<Scalar> {
    // (p + q√d)² = p² + d q² + 2pq√d; p² and d·q² are the roots of
    // T² − a·T + d·b²/4 = 0 in ℚ.
    use num_traits::{Signed, Zero};
    let d = Rational::from_integer(x.d.into());
    if x.b.is_zero() {
        if let Some(r) = sqrt_detect(&x.a) {
            return Some(Scalar::Rat(r));
        }
        let q2 = &x.a / &d;
        return sqrt_detect(&q2).and_then(|q| Scalar::quad(Rational::zero(), q, x.d).ok());
    }
    let disc = &x.a * &x.a - &d * &x.b * &x.b;
    let s = sqrt_detect(&disc)?;
    for cand in [(&x.a + &s) / Rational::from_integer(2.into()), (&x.a - &s) / Rational::from_integer(2.into())] {
        if cand.is_negative() || cand.is_zero() {
            continue;
        }
        if let Some(p) = sqrt_detect(&cand) {
            let q = &x.b / (Rational::from_integer(2.into()) * &p);
            let y = QuadExt { a: p, b: q, d: x.d };
            if y.checked_mul(&y).ok()? == *x {
                return Some(Scalar::from(y));
            }
        }
    }
    None
}
