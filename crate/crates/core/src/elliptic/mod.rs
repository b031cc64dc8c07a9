//! Weierstrass curves over ℚ, the elliptic fibrations of S₃ and S₄, and the
//! specialized curves E₅–E₈ whose rational points give Belyi parameters.

mod bundles;
mod curve;
pub mod density;
mod specialize;

use thiserror::Error;

use crate::exact::ExactError;

pub use bundles::{E3Bundle, E4Bundle, E4Invariants, E4StarBundle, FiberPoint};
pub use curve::{mw_enumerate, CurveQ, MWSpec, PointQ};
pub use density::{period_density, DensityReport};
pub use specialize::{specialize, ParamImage, Specialization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("point {0} is not on the curve")]
    NotOnCurve(String),
    #[error("{0} is not annihilated by {1}")]
    NotTorsion(String, u32),
    #[error("singular fibre: {0}")]
    SingularFiber(String),
    #[error("point has v = 0")]
    VZero,
    #[error("point at infinity has no finite image")]
    AtInfinity,
    #[error("excluded fibre b = {0}")]
    ExcludedFiber(String),
    #[error("W₂ vanishes at the point")]
    WZero,
    #[error("degenerate fibre: {0}")]
    DegenerateFiber(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("no specialized curve for m = {0}")]
    UnsupportedDegree(u32),
    #[error(transparent)]
    Exact(#[from] ExactError),
}
