use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::EllipticError;
use crate::exact::{fmt_rational, sqrt_detect, Rational};

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// v² = u³ + a₂u² + a₄u + a₆ over ℚ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveQ {
    pub a2: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PointQ {
    Infinity,
    Affine { u: Rational, v: Rational },
}

impl PointQ {
    pub fn new(u: Rational, v: Rational) -> Self {
        PointQ::Affine { u, v }
    }

    pub fn ints(u: i64, v: i64) -> Self {
        PointQ::Affine { u: ri(u), v: ri(v) }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, PointQ::Infinity)
    }

    pub fn coords(&self) -> Option<(&Rational, &Rational)> {
        match self {
            PointQ::Infinity => None,
            PointQ::Affine { u, v } => Some((u, v)),
        }
    }

    pub fn u(&self) -> Option<&Rational> {
        self.coords().map(|c| c.0)
    }
}

impl fmt::Display for PointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointQ::Infinity => write!(f, "O"),
            PointQ::Affine { u, v } => write!(f, "({}, {})", fmt_rational(u), fmt_rational(v)),
        }
    }
}

impl Serialize for PointQ {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PointQ::Infinity => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("infinity", &true)?;
                m.end()
            }
            PointQ::Affine { u, v } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("u", &fmt_rational(u))?;
                m.serialize_entry("v", &fmt_rational(v))?;
                m.end()
            }
        }
    }
}

impl CurveQ {
    pub fn new(a2: Rational, a4: Rational, a6: Rational) -> Result<Self, EllipticError> {
        let c = CurveQ { a2, a4, a6 };
        if c.discriminant().is_zero() {
            return Err(EllipticError::SingularFiber(c.to_string()));
        }
        Ok(c)
    }

    pub fn from_ints(a2: i64, a4: i64, a6: i64) -> Result<Self, EllipticError> {
        Self::new(ri(a2), ri(a4), ri(a6))
    }

    pub fn rhs(&self, u: &Rational) -> Rational {
        ((u + &self.a2) * u + &self.a4) * u + &self.a6
    }

    pub fn contains(&self, p: &PointQ) -> bool {
        match p {
            PointQ::Infinity => true,
            PointQ::Affine { u, v } => v * v == self.rhs(u),
        }
    }

    /// Checked constructor for an affine point.
    pub fn point(&self, u: Rational, v: Rational) -> Result<PointQ, EllipticError> {
        let p = PointQ::Affine { u, v };
        self.check_point(&p)?;
        Ok(p)
    }

    /// The point with this u and v ≥ 0, when the right-hand side is a rational square.
    pub fn lift_u(&self, u: &Rational) -> Option<PointQ> {
        sqrt_detect(&self.rhs(u)).map(|v| PointQ::Affine { u: u.clone(), v })
    }

    pub(crate) fn check_point(&self, p: &PointQ) -> Result<(), EllipticError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(EllipticError::NotOnCurve(p.to_string()))
        }
    }

    fn b_invariants(&self) -> (Rational, Rational, Rational, Rational) {
        let b2 = ri(4) * &self.a2;
        let b4 = ri(2) * &self.a4;
        let b6 = ri(4) * &self.a6;
        let b8 = ri(4) * &self.a2 * &self.a6 - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> Rational {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2 * &b8) - ri(8) * &b4 * &b4 * &b4 - ri(27) * &b6 * &b6 + ri(9) * &b2 * &b4 * &b6
    }

    pub fn j_invariant(&self) -> Rational {
        let (b2, b4, _, _) = self.b_invariants();
        let c4 = &b2 * &b2 - ri(24) * &b4;
        &c4 * &c4 * &c4 / self.discriminant()
    }

    pub fn negate(&self, p: &PointQ) -> PointQ {
        match p {
            PointQ::Infinity => PointQ::Infinity,
            PointQ::Affine { u, v } => PointQ::Affine { u: u.clone(), v: -v },
        }
    }

    /// Chord–tangent addition. Both inputs must lie on the curve.
    pub fn add(&self, p: &PointQ, q: &PointQ) -> Result<PointQ, EllipticError> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub(crate) fn add_unchecked(&self, p: &PointQ, q: &PointQ) -> PointQ {
        let (u1, v1, u2, v2) = match (p, q) {
            (PointQ::Infinity, _) => return q.clone(),
            (_, PointQ::Infinity) => return p.clone(),
            (PointQ::Affine { u: u1, v: v1 }, PointQ::Affine { u: u2, v: v2 }) => (u1, v1, u2, v2),
        };
        let lambda = if u1 == u2 {
            if (v1 + v2).is_zero() {
                return PointQ::Infinity;
            }
            (ri(3) * u1 * u1 + ri(2) * &self.a2 * u1 + &self.a4) / (ri(2) * v1)
        } else {
            (v2 - v1) / (u2 - u1)
        };
        let u3 = &lambda * &lambda - &self.a2 - u1 - u2;
        let v3 = -(v1 + &lambda * (&u3 - u1));
        PointQ::Affine { u: u3, v: v3 }
    }

    pub fn double(&self, p: &PointQ) -> Result<PointQ, EllipticError> {
        self.add(p, p)
    }

    /// n·P by double-and-add.
    pub fn scalar_mul(&self, p: &PointQ, n: i64) -> Result<PointQ, EllipticError> {
        self.check_point(p)?;
        let mut base = if n < 0 { self.negate(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = PointQ::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Smallest n ≤ max_order with n·P = O.
    pub fn torsion_order(&self, p: &PointQ, max_order: u32) -> Result<Option<u32>, EllipticError> {
        self.check_point(p)?;
        let mut acc = p.clone();
        for n in 1..=max_order {
            if acc.is_infinity() {
                return Ok(Some(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(None)
    }
}

impl fmt::Display for CurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v^2 = u^3")?;
        for (c, m) in [(&self.a2, "u^2"), (&self.a4, "u"), (&self.a6, "")] {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if *c < Rational::zero() { ("-", -c) } else { ("+", c.clone()) };
            if m.is_empty() {
                write!(f, " {} {}", sign, fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, " {} {}", sign, m)?;
            } else {
                write!(f, " {} {}*{}", sign, fmt_rational(&mag), m)?;
            }
        }
        Ok(())
    }
}

/// Generators of a Mordell–Weil lattice to enumerate, with a coefficient bound.
#[derive(Clone, Debug)]
pub struct MWSpec {
    pub curve: CurveQ,
    pub free_generators: Vec<PointQ>,
    pub torsion_generators: Vec<(PointQ, u32)>,
    pub bound: u32,
    /// LMFDB label of the specialized curve, kept as provenance.
    pub label: Option<&'static str>,
}

impl MWSpec {
    pub fn validate(&self) -> Result<(), EllipticError> {
        for g in &self.free_generators {
            self.curve.check_point(g)?;
        }
        for (t, ord) in &self.torsion_generators {
            if !self.curve.scalar_mul(t, *ord as i64)?.is_infinity() {
                return Err(EllipticError::NotTorsion(t.to_string(), *ord));
            }
        }
        Ok(())
    }
}

/// All Σ nᵢgᵢ + torsion with |nᵢ| ≤ bound, deduplicated and sorted by
/// (bit size of the u denominator, u). The identity is dropped unless
/// `keep_infinity` is set.
pub fn mw_enumerate(spec: &MWSpec, keep_infinity: bool) -> Result<Vec<PointQ>, EllipticError> {
    spec.validate()?;
    let curve = &spec.curve;
    if spec.free_generators.is_empty() && spec.torsion_generators.is_empty() {
        return Ok(if keep_infinity { vec![PointQ::Infinity] } else { Vec::new() });
    }
    let bound = spec.bound as usize;

    // Torsion subgroup elements from the listed generators.
    let mut tors = vec![PointQ::Infinity];
    for (t, ord) in &spec.torsion_generators {
        let mut next = Vec::new();
        for base in &tors {
            let mut acc = base.clone();
            for _ in 0..*ord {
                next.push(acc.clone());
                acc = curve.add_unchecked(&acc, t);
            }
        }
        tors = next;
    }

    let mut acc = vec![PointQ::Infinity];
    for g in &spec.free_generators {
        // multiples[k] = k·g for k = 0..=bound
        let mut multiples = vec![PointQ::Infinity];
        for k in 1..=bound {
            let prev = &multiples[k - 1];
            multiples.push(curve.add_unchecked(prev, g));
        }
        let mut next = Vec::with_capacity(acc.len() * (2 * bound + 1));
        for a in &acc {
            next.push(a.clone());
            for m in &multiples[1..] {
                next.push(curve.add_unchecked(a, m));
                next.push(curve.add_unchecked(a, &curve.negate(m)));
            }
        }
        acc = next;
    }

    let mut out = Vec::with_capacity(acc.len() * tors.len());
    for a in &acc {
        for t in &tors {
            out.push(curve.add_unchecked(a, t));
        }
    }
    if !keep_infinity {
        out.retain(|p| !p.is_infinity());
    }
    out.sort_by(|p, q| point_order_key(p).cmp(&point_order_key(q)));
    out.dedup();
    Ok(out)
}

fn point_order_key(p: &PointQ) -> (u64, Option<(&Rational, &Rational)>) {
    match p {
        PointQ::Infinity => (0, None),
        PointQ::Affine { u, v } => (u.denom().bits(), Some((u, v))),
    }
}
