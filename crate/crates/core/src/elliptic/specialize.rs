use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::bundles::{E3Bundle, E4StarBundle};
use super::curve::{CurveQ, MWSpec, PointQ};
use super::EllipticError;
use crate::exact::{Rational, Scalar};
use crate::hypergeom::{hpg_eval, HpgSpec};
use crate::surfaces::{s3_residual_in, s4_residual_in};

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn rq(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of a specialized curve mapped to the Belyi parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamImage {
    pub p_over_r: Scalar,
    pub z: Scalar,
    pub field: String,
}

#[derive(Clone, Debug)]
enum Source {
    /// (u, v) = ((U − shift)/4, V/8) on the b-fibre of E₃.
    Cubic {
        bundle: E3Bundle,
        shift: Rational,
    },
    Quartic {
        bundle: E4StarBundle,
    },
}

/// The curve attached to ₂F₁(−N, b; −p/r − m; z) = 0 for m ∈ {5, 6, 7, 8}.
#[derive(Clone, Debug)]
pub struct Specialization {
    pub m: u32,
    pub curve: CurveQ,
    /// b of the relation: −5/2, −7/2, −7/2, −9/2.
    pub b: Rational,
    /// p/r = c − offset, with c the surface coordinate.
    pub offset: Rational,
    pub label: &'static str,
    source: Source,
    free: Vec<PointQ>,
    torsion: Vec<(PointQ, u32)>,
}

pub fn specialize(m: u32) -> Result<Specialization, EllipticError> {
    match m {
        5 | 6 => {
            let b = if m == 5 { rq(-5, 2) } else { rq(-7, 2) };
            let bundle = E3Bundle::new(b.clone())?;
            let shift = ri(12) * &b * &b;
            let curve = shifted_curve(&bundle.curve, &shift)?;
            let (free, torsion, label) = if m == 5 {
                (PointQ::ints(-5, 80), PointQ::ints(75, 480), "4050.y2")
            } else {
                (PointQ::ints(35, 336), PointQ::ints(147, 1120), "13230.dp1")
            };
            Ok(Specialization {
                m,
                curve,
                b,
                offset: ri(m as i64 - 2),
                label,
                source: Source::Cubic { bundle, shift },
                free: vec![free],
                torsion: vec![(torsion, 3)],
            })
        }
        7 | 8 => {
            let b = if m == 7 { rq(-7, 2) } else { rq(-9, 2) };
            let bundle = E4StarBundle::new(b.clone())?;
            let curve = bundle.curve.clone();
            let (free, label) = if m == 7 {
                (vec![PointQ::new(rq(105, 2), rq(-105, 2)), PointQ::ints(60, 15)], "94080.el2")
            } else {
                (vec![PointQ::new(rq(189, 2), rq(-567, 2)), PointQ::new(rq(945, 4), rq(14175, 8))], "40320.bf2")
            };
            Ok(Specialization {
                m,
                curve,
                b,
                offset: ri(m as i64 - 3),
                label,
                source: Source::Quartic { bundle },
                free,
                torsion: vec![(PointQ::new(Rational::zero(), Rational::zero()), 2)],
            })
        }
        _ => Err(EllipticError::UnsupportedDegree(m)),
    }
}

/// v² = (u−s)³ + 4a₂(u−s)² + 16a₄(u−s) + 64a₆, the image of (u, v) ↦ (4u + s, 8v).
fn shifted_curve(c: &CurveQ, s: &Rational) -> Result<CurveQ, EllipticError> {
    let a2 = ri(4) * &c.a2;
    let a4 = ri(16) * &c.a4;
    let a6 = ri(64) * &c.a6;
    CurveQ::new(ri(-3) * s + &a2, ri(3) * s * s - ri(2) * &a2 * s + &a4, -(s * s * s) + &a2 * s * s - &a4 * s + a6)
}

impl Specialization {
    /// Degree N of the hypergeometric relation.
    pub fn degree(&self) -> usize {
        match self.source {
            Source::Cubic { .. } => 3,
            Source::Quartic { .. } => 4,
        }
    }

    pub fn mw_spec(&self, bound: u32) -> MWSpec {
        MWSpec {
            curve: self.curve.clone(),
            free_generators: self.free.clone(),
            torsion_generators: self.torsion.clone(),
            bound,
            label: Some(self.label),
        }
    }

    /// Coordinates on the fibration the curve was specialized from.
    pub fn to_fibration(&self, p: &PointQ) -> Result<PointQ, EllipticError> {
        self.curve.check_point(p)?;
        match (&self.source, p) {
            (_, PointQ::Infinity) => Ok(PointQ::Infinity),
            (Source::Cubic { shift, .. }, PointQ::Affine { u, v }) => Ok(PointQ::new((u - shift) / ri(4), v / ri(8))),
            (Source::Quartic { .. }, _) => Ok(p.clone()),
        }
    }

    /// Parameter pairs (p/r, z) over this point. For m = 5, 6 one rational
    /// pair; for m = 7, 8 the two pairs over the quadratic in z.
    pub fn image(&self, p: &PointQ) -> Result<Vec<ParamImage>, EllipticError> {
        let q = self.to_fibration(p)?;
        let off = Scalar::Rat(self.offset.clone());
        match &self.source {
            Source::Cubic { bundle, .. } => {
                let (c, z) = bundle.to_surface(&q)?;
                Ok(vec![ParamImage { p_over_r: Scalar::Rat(c - &self.offset), z: Scalar::Rat(z), field: "Q".into() }])
            }
            Source::Quartic { bundle } => Ok(bundle
                .fiber_image(&q)?
                .into_iter()
                .map(|f| ParamImage { p_over_r: f.c - off.clone(), z: f.z, field: f.field })
                .collect()),
        }
    }

    /// √ of the rational-z filter at a point of E₇ or E₈.
    pub fn square_filter(&self, p: &PointQ) -> Result<Option<Rational>, EllipticError> {
        match &self.source {
            Source::Quartic { bundle } => bundle.square_filter(p),
            Source::Cubic { .. } => Ok(None),
        }
    }

    /// Cleared surface polynomial at the image: zero for every valid image.
    pub fn residual(&self, img: &ParamImage) -> Scalar {
        let b = Scalar::Rat(self.b.clone());
        let c = img.p_over_r.clone() + Scalar::Rat(self.offset.clone());
        match self.source {
            Source::Cubic { .. } => s3_residual_in(&b, &c, &img.z),
            Source::Quartic { .. } => s4_residual_in(&b, &c, &img.z),
        }
    }

    /// ₂F₁(−N, b; −p/r − m; ·) for rational p/r.
    pub fn hpg_spec(&self, p_over_r: &Rational) -> HpgSpec {
        HpgSpec::new(self.degree(), self.b.clone(), -p_over_r - ri(self.m as i64))
    }

    /// ₂F₁ value at a rational image when the hypergeometric polynomial is
    /// defined; `None` otherwise.
    pub fn hpg_value(&self, img: &ParamImage) -> Option<Rational> {
        let (a, z) = (img.p_over_r.as_rational()?, img.z.as_rational()?);
        let spec = self.hpg_spec(a);
        if !spec.is_defined() {
            return None;
        }
        hpg_eval(&spec, z).ok()
    }

    /// True when the relation polynomial is defined and of full degree.
    pub fn is_nondegenerate(&self, img: &ParamImage) -> bool {
        match img.p_over_r.as_rational() {
            Some(a) => {
                let spec = self.hpg_spec(a);
                spec.is_defined() && spec.effective_degree() == self.degree()
            }
            // Over ℚ(√d) the lower parameter is irrational, hence never a pole.
            None => !img.z.is_zero(),
        }
    }
}
