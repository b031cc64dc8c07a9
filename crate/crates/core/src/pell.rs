//! Pell-type families of form-2 Belyi data with two rational z-roots.
//!
//! For odd m the quadratics 3z² + 6(m+1)z + m² − 1 and
//! 3z² − 6(m+2)z + (m+2)(m+4) share the discriminant 24(m+1)(m+2), which is a
//! square exactly when (2m+3)² − 6d² = 1. For even m the pair
//! 15z² − 10mz + m(m−2), 15z² − 10(m+3)z + (m+3)(m+5) leads to
//! (2m+3)² − 10d² = 9.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{fmt_rational, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    #[error("candidate m = {0} has the wrong parity for its branch")]
    ParityInvalid(i64),
    #[error("radicand must be 6 or 10, got {0}")]
    UnsupportedField(i64),
    #[error("m = {0} does not fit in 64 bits")]
    TooLarge(String),
}

/// a + b√d with integer a, b.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadUnit {
    pub a: BigInt,
    pub b: BigInt,
    pub d: i64,
}

impl QuadUnit {
    pub fn new(a: i64, b: i64, d: i64) -> Self {
        QuadUnit { a: a.into(), b: b.into(), d }
    }

    pub fn one(d: i64) -> Self {
        Self::new(1, 0, d)
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "QuadUnit fields differ");
        QuadUnit {
            a: &self.a * &o.a + BigInt::from(self.d) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl std::fmt::Display for QuadUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_negative() {
            write!(f, "{}-{}*sqrt({})", self.a, -&self.b, self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

pub fn unit_power(base: &QuadUnit, n: u32) -> QuadUnit {
    let mut acc = QuadUnit::one(base.d);
    let mut sq = base.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&sq);
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul(&sq);
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PellFamily {
    /// (5+2√6)ⁿ, odd m.
    Six,
    /// (3+√10)ⁿ with m divisible by 3.
    TenUnitReduced,
    /// (1+√10)(3+√10)ⁿ.
    TenNormPlus,
    /// (1−√10)(3+√10)ⁿ.
    TenNormMinus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PellCandidate {
    pub n: u32,
    pub family: PellFamily,
    #[serde(serialize_with = "ser_bigint")]
    pub m: BigInt,
    /// Roots of the ℓ = (m+5)/2 or ℓ = (m+6)/2 quadratic, larger first.
    #[serde(serialize_with = "ser_pair")]
    pub z_roots: (Rational, Rational),
    /// Roots of the half-integer companion quadratic (ℓ = m−4 or ℓ = m−5).
    #[serde(serialize_with = "ser_pair")]
    pub companion_z_roots: (Rational, Rational),
    pub parity_valid: bool,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_pair<S: serde::Serializer>(x: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut q = s.serialize_seq(Some(2))?;
    q.serialize_element(&fmt_rational(&x.0))?;
    q.serialize_element(&fmt_rational(&x.1))?;
    q.end()
}

fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn bi(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// 3z² + 6(m+1)z + m² − 1
pub fn six_main_quadratic(m: &Rational, z: &Rational) -> Rational {
    r(3) * z * z + r(6) * (m + r(1)) * z + m * m - r(1)
}

/// 3z² − 6(m+2)z + (m+2)(m+4)
pub fn six_companion_quadratic(m: &Rational, z: &Rational) -> Rational {
    r(3) * z * z - r(6) * (m + r(2)) * z + (m + r(2)) * (m + r(4))
}

/// 15z² − 10mz + m(m−2)
pub fn ten_main_quadratic(m: &Rational, z: &Rational) -> Rational {
    r(15) * z * z - r(10) * m * z + m * (m - r(2))
}

/// 15z² − 10(m+3)z + (m+3)(m+5)
pub fn ten_companion_quadratic(m: &Rational, z: &Rational) -> Rational {
    r(15) * z * z - r(10) * (m + r(3)) * z + (m + r(3)) * (m + r(5))
}

fn ordered(a: Rational, b: Rational) -> (Rational, Rational) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Candidates from (5+2√6)ⁿ = (2m+3) ± √6(z+m+1), n = 1..=n_max.
/// Exponents giving m < 5 (so that ℓ = (m+5)/2 exceeds m) are skipped.
pub fn solve_pell6(n_max: u32) -> Vec<PellCandidate> {
    let base = QuadUnit::new(5, 2, 6);
    let mut out = Vec::new();
    for n in 1..=n_max {
        let u = unit_power(&base, n);
        let m = (&u.a - 3) / 2;
        if m < BigInt::from(5) {
            continue;
        }
        let mr = bi(&m);
        let b = bi(&u.b);
        let z_roots = ordered(&b - &mr - r(1), -&b - &mr - r(1));
        let companion_z_roots = ordered(&mr + r(2) + &b, &mr + r(2) - &b);
        debug_assert!(six_main_quadratic(&mr, &z_roots.0).is_zero());
        debug_assert!(six_companion_quadratic(&mr, &companion_z_roots.1).is_zero());
        out.push(PellCandidate { n, family: PellFamily::Six, parity_valid: m.is_odd(), m, z_roots, companion_z_roots });
    }
    out
}

/// Candidates of (2m+3)² − 10d² = 9 from the three families, ordered by
/// family then n. m must be even; odd m are kept with `parity_valid = false`.
pub fn solve_pell10(n_max: u32) -> Vec<PellCandidate> {
    let unit = QuadUnit::new(3, 1, 10);
    let mut out = Vec::new();
    let families = [
        (PellFamily::TenUnitReduced, QuadUnit::one(10)),
        (PellFamily::TenNormPlus, QuadUnit::new(1, 1, 10)),
        (PellFamily::TenNormMinus, QuadUnit::new(1, -1, 10)),
    ];
    for (family, seed) in families {
        for n in 1..=n_max {
            let w = seed.mul(&unit_power(&unit, n));
            let (m, d) = if family == PellFamily::TenUnitReduced {
                // (2m/3+1)² − 10d̂² = 1 needs an even exponent.
                if n % 2 == 1 {
                    continue;
                }
                (((&w.a - 1) * 3) / 2, &w.b * 3)
            } else {
                if n % 2 == 0 {
                    continue;
                }
                ((w.a.abs() - 3) / 2, w.b.abs())
            };
            if m < BigInt::from(6) {
                continue;
            }
            let mr = bi(&m);
            let dr = bi(&d);
            let z_roots = ordered((&mr + &dr) / r(3), (&mr - &dr) / r(3));
            let c = &mr + r(3);
            let companion_z_roots = ordered((&c + &dr) / r(3), (&c - &dr) / r(3));
            debug_assert!(ten_main_quadratic(&mr, &z_roots.0).is_zero());
            debug_assert!(ten_companion_quadratic(&mr, &companion_z_roots.0).is_zero());
            out.push(PellCandidate { n, family, parity_valid: m.is_even(), m, z_roots, companion_z_roots });
        }
    }
    out
}

pub fn solve_pell(d: i64, n_max: u32) -> Result<Vec<PellCandidate>, PellError> {
    match d {
        6 => Ok(solve_pell6(n_max)),
        10 => Ok(solve_pell10(n_max)),
        _ => Err(PellError::UnsupportedField(d)),
    }
}

/// Form-2 input (1 + αx + βx²)^p G_m^r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Form2Input {
    pub p: i64,
    pub r: i64,
    pub m: usize,
    pub alpha: Scalar,
    pub beta: Scalar,
}

/// Both branches of a candidate: p/r = −ℓ with H₂ = 1 + x + (z/4)x², and the
/// companion p/r = −ℓ′/2 with H₂ = 1 + 2x + z x².
pub fn pell_to_candidates(c: &PellCandidate) -> Result<Vec<Form2Input>, PellError> {
    let m = c.m.to_i64().ok_or_else(|| PellError::TooLarge(c.m.to_string()))?;
    if !c.parity_valid {
        return Err(PellError::ParityInvalid(m));
    }
    let (main_l, comp_l) = match c.family {
        PellFamily::Six => ((m + 5) / 2, m - 4),
        _ => ((m + 6) / 2, m - 5),
    };
    let mu = m as usize;
    let mut out = Vec::new();
    for z in [&c.z_roots.0, &c.z_roots.1] {
        out.push(Form2Input { p: -main_l, r: 1, m: mu, alpha: Scalar::from_int(1), beta: Scalar::Rat(z / r(4)) });
    }
    for z in [&c.companion_z_roots.0, &c.companion_z_roots.1] {
        out.push(Form2Input { p: -comp_l, r: 2, m: mu, alpha: Scalar::from_int(2), beta: Scalar::Rat(z.clone()) });
    }
    Ok(out)
}

/// The shared discriminant 24(m+1)(m+2) of the two odd-m quadratics.
pub fn six_discriminant(m: &BigInt) -> BigInt {
    BigInt::from(24) * (m + BigInt::one()) * (m + BigInt::from(2))
}
