use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::ExactError;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `n` or `n/d`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    let bad = || ExactError::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Squarefree part of a nonzero integer, sign kept. Trial division up to 10^6;
/// a cofactor above that bound must itself be prime or a perfect square.
pub fn squarefree_part(n: &BigInt) -> Result<BigInt, ExactError> {
    if n.is_zero() {
        return Err(ExactError::Squarefree(n.to_string()));
    }
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut m = n.abs();
    let mut out = BigInt::one();
    let mut digits = m.magnitude().to_u64_digits();
    let mut p: u64 = 2;
    while p <= 1_000_000 {
        if digits.len() <= 1 && u128::from(p) * u128::from(p) > u128::from(digits.first().copied().unwrap_or(0)) {
            break;
        }
        if rem_u64(&digits, p) == 0 {
            let mut e = 0u32;
            while (&m % p).is_zero() {
                m /= p;
                e += 1;
            }
            if e % 2 == 1 {
                out *= p;
            }
            digits = m.magnitude().to_u64_digits();
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let p = BigInt::from(p);
    if m > BigInt::one() {
        if &p * &p <= m {
            let s = m.sqrt();
            if &s * &s == m {
                return Ok(sign * out);
            }
            if !probable_prime(&m) {
                return Err(ExactError::Squarefree(n.to_string()));
            }
        }
        out *= m;
    }
    Ok(sign * out)
}

fn rem_u64(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0u128, |acc, &d| ((acc << 64) | u128::from(d)) % u128::from(p)) as u64
}

/// Miller–Rabin with the first twelve prime bases.
pub fn probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2u32);
    if *n < two {
        return false;
    }
    let bases = [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in bases {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'outer: for b in bases {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Exact square root of a rational, if it is a square.
pub fn sqrt_detect(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Element a + b·√d of a quadratic field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self, ExactError> {
        if d == 0 || d == 1 {
            return Err(ExactError::BadRadicand(d));
        }
        let sf = squarefree_part(&BigInt::from(d))?;
        if sf != BigInt::from(d) {
            return Err(ExactError::BadRadicand(d));
        }
        Ok(QuadExt { a, b, d })
    }

    /// √d itself.
    pub fn sqrt_of(d: i64) -> Result<Self, ExactError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn conj(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(BigInt::from(self.d)) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    fn dr(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.d))
    }

    fn same(&self, o: &Self) -> Result<(), ExactError> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(ExactError::MixedField(self.d, o.d))
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.same(o)?;
        Ok(QuadExt { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.same(o)?;
        Ok(QuadExt { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d })
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.same(o)?;
        let a = &self.a * &o.a + self.dr() * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(QuadExt { a, b, d: self.d })
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(QuadExt { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        self.same(o)?;
        self.checked_mul(&o.inv()?)
    }

    pub fn approx(&self) -> (f64, f64) {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.d > 0 {
            (a + b * (self.d as f64).sqrt(), 0.0)
        } else {
            (a, b * (-(self.d as f64)).sqrt())
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = fmt_rational(&self.b.abs());
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let lead = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{}{}*sqrt({})", lead, b, self.d)
        } else {
            write!(f, "{} {} {}*sqrt({})", fmt_rational(&self.a), sign, b, self.d)
        }
    }
}

/// Every coefficient in the system: a rational or an element of one ℚ(√d).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Quad(QuadExt),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(int(n))
    }

    pub fn quad(a: Rational, b: Rational, d: i64) -> Result<Self, ExactError> {
        Ok(Scalar::Quad(QuadExt::new(a, b, d)?).normalized())
    }

    fn normalized(self) -> Self {
        match self {
            Scalar::Quad(q) if q.b.is_zero() => Scalar::Rat(q.a),
            s => s,
        }
    }

    /// √r as an element of ℚ or ℚ(√d), d the squarefree part of r.
    pub fn sqrt_rational(r: &Rational) -> Result<Self, ExactError> {
        if let Some(s) = sqrt_detect(r) {
            return Ok(Scalar::Rat(s));
        }
        // √(n/m) = √(n·m)/m = f·√s/m with n·m = f²·s.
        let nm = r.numer() * r.denom();
        let s = squarefree_part(&nm)?;
        let f = (&nm / &s).sqrt();
        let d = s.to_i64().ok_or(ExactError::RadicandTooLarge)?;
        Scalar::quad(Rational::zero(), Rational::new(f, r.denom().clone()), d)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    /// The radicand of the field this value lives in, if it is irrational.
    pub fn field(&self) -> Option<i64> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Quad(q) => Some(q.d),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r.clone()),
            Scalar::Quad(q) => Scalar::Quad(q.conj()),
        }
    }

    fn lift(&self, d: i64) -> QuadExt {
        match self {
            Scalar::Rat(r) => QuadExt { a: r.clone(), b: Rational::zero(), d },
            Scalar::Quad(q) => q.clone(),
        }
    }

    fn binop(
        &self,
        o: &Self,
        fr: impl Fn(&Rational, &Rational) -> Result<Rational, ExactError>,
        fq: impl Fn(&QuadExt, &QuadExt) -> Result<QuadExt, ExactError>,
    ) -> Result<Self, ExactError> {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Ok(Scalar::Rat(fr(a, b)?)),
            (Scalar::Quad(a), b) => Ok(Scalar::Quad(fq(a, &b.lift(a.d))?).normalized()),
            (a, Scalar::Quad(b)) => Ok(Scalar::Quad(fq(&a.lift(b.d), b)?).normalized()),
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, ExactError> {
        self.binop(o, |a, b| Ok(a + b), |a, b| a.checked_add(b))
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, ExactError> {
        self.binop(o, |a, b| Ok(a - b), |a, b| a.checked_sub(b))
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, ExactError> {
        self.binop(o, |a, b| Ok(a * b), |a, b| a.checked_mul(b))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, ExactError> {
        self.binop(
            o,
            |a, b| if b.is_zero() { Err(ExactError::DivisionByZero) } else { Ok(a / b) },
            |a, b| a.checked_div(b),
        )
    }

    pub fn approx(&self) -> (f64, f64) {
        match self {
            Scalar::Rat(r) => (r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Quad(q) => q.approx(),
        }
    }

    pub fn field_label(&self) -> String {
        field_label(self.field())
    }
}

pub fn field_label(d: Option<i64>) -> String {
    match d {
        None => "Q".to_string(),
        Some(d) => format!("Q(sqrt {})", d),
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<QuadExt> for Scalar {
    fn from(q: QuadExt) -> Self {
        Scalar::Quad(q).normalized()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Quad(q) => write!(f, "{}", q),
        }
    }
}

/// Rationals first, then quadratic values ordered by (d, a, b).
impl Ord for Scalar {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Rat(_), Scalar::Quad(_)) => Ordering::Less,
            (Scalar::Quad(_), Scalar::Rat(_)) => Ordering::Greater,
            (Scalar::Quad(a), Scalar::Quad(b)) => a.d.cmp(&b.d).then_with(|| a.a.cmp(&b.a)).then_with(|| a.b.cmp(&b.b)),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

macro_rules! scalar_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$checked(&o).expect("scalar arithmetic")
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                self.$checked(o).expect("scalar arithmetic")
            }
        }
    };
}

scalar_op!(Add, add, checked_add);
scalar_op!(Sub, sub, checked_sub);
scalar_op!(Mul, mul, checked_mul);
scalar_op!(Div, div, checked_div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(QuadExt { a: -q.a, b: -q.b, d: q.d }),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_zero())
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::Rat(Rational::one())
    }
}

/// Coefficient field for polynomials and series.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_rational(r: Rational) -> Self;
}

impl Field for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
}

impl Field for Scalar {
    fn from_rational(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

/// Serde adapter for a Rational stored as its canonical string.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Rat(r) => s.serialize_str(&fmt_rational(r)),
            Scalar::Quad(q) => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("a", &fmt_rational(&q.a))?;
                m.serialize_entry("b", &fmt_rational(&q.b))?;
                m.serialize_entry("d", &q.d)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Quad { a: String, b: String, d: i64 },
        }
        match Raw::deserialize(d)? {
            Raw::Text(s) => parse_rational(&s).map(Scalar::Rat).map_err(de::Error::custom),
            Raw::Quad { a, b, d } => {
                let a = parse_rational(&a).map_err(de::Error::custom)?;
                let b = parse_rational(&b).map_err(de::Error::custom)?;
                Scalar::quad(a, b, d).map_err(de::Error::custom)
            }
        }
    }
}

/// Integer height used for ordering search output: max(|num|, den) bit length.
pub fn height_bits(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

/// Greatest common divisor of a list of integers (0 for an empty list).
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Least common multiple of the denominators.
pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}
