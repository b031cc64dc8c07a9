//! Hypergeometric polynomial surfaces and the genus-0 Belyi maps they parametrize.
//!
//! Everything is exact over ℚ or a quadratic field, except
//! [`elliptic::density`] which integrates numerically.

pub mod belyi;
pub mod elliptic;
pub mod exact;
pub mod hypergeom;
pub mod pell;
pub mod surfaces;

pub use exact::{Poly, QuadExt, Rational, Scalar, Series};
