//! The cubic surface S₃ and the quartic surface S₄ cut out by
//! ₂F₁(−3, b; −c−2; z) = 0 and ₂F₁(−4, b; −c−3; z) = 0, with their rational charts.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{fmt_rational, sqrt_detect, Field, MPoly, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("(e, z) lies on 3e+2z+2 = 0 and is blown up to the line {}", .0.label())]
    BlowupLine(BlowupLine),
    #[error("(e, z) lies on 3e+2z+2 = 0 and has no preimage on the surface")]
    NoPreimage,
    #[error("chart excludes z = {0}")]
    ExcludedZ(String),
    #[error("degenerate chart point: {0}")]
    Degenerate(String),
    #[error("chart denominator vanishes: {0}")]
    DegenerateChart(String),
    #[error("pole of the map: {0}")]
    PoleOfMap(String),
}

/// Lines of S₃ lying over the three blown-up points of the (e, z) chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupLine {
    /// b = c, z = −1
    BEqualsC,
    /// 2b + c + 2 = 0, z = 2
    TwoBPlusC,
    /// b + 2c + 2 = 0, z = 1/2
    BPlusTwoC,
}

impl BlowupLine {
    pub fn label(self) -> &'static str {
        match self {
            BlowupLine::BEqualsC => "b=c, z=-1",
            BlowupLine::TwoBPlusC => "2b+c+2=0, z=2",
            BlowupLine::BPlusTwoC => "b+2c+2=0, z=1/2",
        }
    }

    /// Point (b, c, z) on the line with the given b.
    pub fn point(self, b: &Rational) -> (Rational, Rational, Rational) {
        let two = ri(2);
        match self {
            BlowupLine::BEqualsC => (b.clone(), b.clone(), ri(-1)),
            BlowupLine::TwoBPlusC => (b.clone(), -&two * b - &two, two),
            BlowupLine::BPlusTwoC => (b.clone(), (-b - &two) / &two, Rational::new(BigInt::one(), BigInt::from(2))),
        }
    }
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn nz(x: Rational, what: &str) -> Result<Rational, SurfaceError> {
    if x.is_zero() {
        Err(SurfaceError::DegenerateChart(what.to_string()))
    } else {
        Ok(x)
    }
}

/// Defining polynomial of S₃:
/// b(b+1)(b+2)z³ + 3bc(b+1)z² + 3bc(c+1)z + c(c+1)(c+2).
pub fn s3_residual(b: &Rational, c: &Rational, z: &Rational) -> Rational {
    s3_residual_in(b, c, z)
}

/// [`s3_residual`] over any coefficient field.
pub fn s3_residual_in<F: Field>(b: &F, c: &F, z: &F) -> F {
    let one = F::one();
    let two = fi::<F>(2);
    let three = fi::<F>(3);
    let (b, c, z) = (b.clone(), c.clone(), z.clone());
    let b1 = b.clone() + one.clone();
    let c1 = c.clone() + one;
    let z2 = z.clone() * z.clone();
    b.clone() * b1.clone() * (b.clone() + two.clone()) * z2.clone() * z.clone()
        + three.clone() * b.clone() * c.clone() * b1 * z2
        + three * b * c.clone() * c1.clone() * z
        + c.clone() * c1 * (c + two)
}

/// (bz+c)³ + 3(bz+c)(bz²+c) + 2(bz³+c)
pub fn s3_residual_compact(b: &Rational, c: &Rational, z: &Rational) -> Rational {
    let e = b * z + c;
    let z2 = z * z;
    &e * &e * &e + ri(3) * &e * (b * &z2 + c) + ri(2) * (b * &z2 * z + c)
}

/// ((bz+c)² + 3bz² + 3c)² + 2(bz²+c)² + 8bcz(z−1)² + 6(bz⁴+c)
pub fn s4_residual(b: &Rational, c: &Rational, z: &Rational) -> Rational {
    s4_residual_in(b, c, z)
}

/// [`s4_residual`] over any coefficient field.
pub fn s4_residual_in<F: Field>(b: &F, c: &F, z: &F) -> F {
    let (b, c, z) = (b.clone(), c.clone(), z.clone());
    let e = b.clone() * z.clone() + c.clone();
    let z2 = z.clone() * z.clone();
    let zm = z.clone() - F::one();
    let inner = e.clone() * e + fi::<F>(3) * b.clone() * z2.clone() + fi::<F>(3) * c.clone();
    let q = b.clone() * z2.clone() + c.clone();
    inner.clone() * inner
        + fi::<F>(2) * q.clone() * q
        + fi::<F>(8) * b.clone() * c.clone() * z * zm.clone() * zm
        + fi::<F>(6) * (b * z2.clone() * z2 + c)
}

fn fi<F: Field>(n: i64) -> F {
    F::from_rational(ri(n))
}

/// Variables of the symbolic surface polynomials: b = 0, c = 1, z = 2.
pub const NVARS: usize = 3;

fn rising(x: &MPoly, k: u32) -> MPoly {
    let mut acc = MPoly::int(NVARS, 1);
    for i in 0..k {
        acc = &acc * &(x + &MPoly::int(NVARS, i as i64));
    }
    acc
}

/// (C)_N · ₂F₁(−N, b; C; z) with C = −c + 1 − N, as a polynomial in b, c, z.
pub fn hpg_cleared_mpoly(n: u32) -> MPoly {
    let b = MPoly::var(NVARS, 0);
    let c = MPoly::var(NVARS, 1);
    let z = MPoly::var(NVARS, 2);
    let lower = &(-&c) + &MPoly::int(NVARS, 1 - n as i64);
    let mut acc = MPoly::zero(NVARS);
    let mut binom = Rational::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * ri(k as i64 - 1 - n as i64) / ri(k as i64);
        }
        let lk = &lower + &MPoly::int(NVARS, k as i64);
        let term = &(&rising(&b, k) * &rising(&lk, n - k)) * &z.pow(k);
        acc = &acc + &term.scale(&binom);
    }
    acc
}

pub fn s3_mpoly() -> MPoly {
    let b = MPoly::var(NVARS, 0);
    let c = MPoly::var(NVARS, 1);
    let z = MPoly::var(NVARS, 2);
    let one = MPoly::int(NVARS, 1);
    let two = MPoly::int(NVARS, 2);
    let b1 = &b + &one;
    let c1 = &c + &one;
    let t0 = &(&(&b * &b1) * &(&b + &two)) * &z.pow(3);
    let t1 = (&(&(&b * &c) * &b1) * &z.pow(2)).scale(&ri(3));
    let t2 = (&(&(&b * &c) * &c1) * &z).scale(&ri(3));
    let t3 = &(&c * &c1) * &(&c + &two);
    &(&t0 + &t1) + &(&t2 + &t3)
}

pub fn s3_compact_mpoly() -> MPoly {
    let b = MPoly::var(NVARS, 0);
    let c = MPoly::var(NVARS, 1);
    let z = MPoly::var(NVARS, 2);
    let e = &(&b * &z) + &c;
    let q = &(&b * &z.pow(2)) + &c;
    let r = &(&b * &z.pow(3)) + &c;
    &(&e.pow(3) + &(&e * &q).scale(&ri(3))) + &r.scale(&ri(2))
}

pub fn s4_mpoly() -> MPoly {
    let b = MPoly::var(NVARS, 0);
    let c = MPoly::var(NVARS, 1);
    let z = MPoly::var(NVARS, 2);
    let e = &(&b * &z) + &c;
    let q = &(&b * &z.pow(2)) + &c;
    let inner = &(&e.pow(2) + &(&b * &z.pow(2)).scale(&ri(3))) + &c.scale(&ri(3));
    let zm = &z - &MPoly::int(NVARS, 1);
    let mixed = (&(&(&b * &c) * &z) * &zm.pow(2)).scale(&ri(8));
    let quart = (&(&b * &z.pow(4)) + &c).scale(&ri(6));
    &(&inner.pow(2) + &q.pow(2).scale(&ri(2))) + &(&mixed + &quart)
}

/// Signs of b and c.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignPair {
    pub b: Ordering,
    pub c: Ordering,
}

impl SignPair {
    pub fn both_positive(&self) -> bool {
        self.b == Ordering::Greater && self.c == Ordering::Greater
    }
}

fn sign(x: &Rational) -> Ordering {
    x.cmp(&Rational::zero())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S3Point {
    pub b: Rational,
    pub c: Rational,
    pub z: Rational,
    pub e: Rational,
    pub signs: SignPair,
    /// z < 0 and e(3e+2z+2) < 0
    pub positive_region: bool,
}

/// Birational chart of S₃ by e = bz + c and z.
pub fn s3_param(e: &Rational, z: &Rational) -> Result<S3Point, SurfaceError> {
    let one = Rational::one();
    let two = ri(2);
    if z.is_zero() || z.is_one() {
        return Err(SurfaceError::ExcludedZ(fmt_rational(z)));
    }
    let d = ri(3) * e + &two * z + &two;
    if d.is_zero() {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let line = if e.is_zero() && *z == ri(-1) {
            Some(BlowupLine::BEqualsC)
        } else if *e == ri(-2) && *z == two {
            Some(BlowupLine::TwoBPlusC)
        } else if *e == -&one && *z == half {
            Some(BlowupLine::BPlusTwoC)
        } else {
            None
        };
        return Err(line.map_or(SurfaceError::NoPreimage, SurfaceError::BlowupLine));
    }
    let b = e * (e + &one) * (e + &two) / (z * (&one - z) * &d);
    let c = e * (e + z) * (e + &two * z) / ((z - &one) * &d);
    let signs = SignPair { b: sign(&b), c: sign(&c) };
    let positive_region = z.is_negative() && (e * &d).is_negative();
    Ok(S3Point { b, c, z: z.clone(), e: e.clone(), signs, positive_region })
}

/// The cubic of S₃ as a polynomial in z for fixed (b, c).
pub fn s3_cubic_in_z(b: &Rational, c: &Rational) -> Poly<Rational> {
    let one = Rational::one();
    let two = ri(2);
    let three = ri(3);
    Poly::new(vec![
        c * (c + &one) * (c + &two),
        &three * b * c * (c + &one),
        &three * b * c * (b + &one),
        b * (b + &one) * (b + &two),
    ])
}

/// The closed-form quadratic for the two roots other than z = s, up to a
/// nonzero constant factor.
pub fn s3_companion_quadratic(e: &Rational, s: &Rational) -> Result<Poly<Rational>, SurfaceError> {
    let two = ri(2);
    let d1 = nz(e + &two * s - &two, "e+2s-2")?;
    let d2 = nz(e - &two * s + &two, "e-2s+2")?;
    let a2 = (e * e - &two * e * s - &two * s * s + ri(3) * e + &two) / d1;
    let a1 = -(&two * e + s + Rational::one()) * s;
    let a0 = (e * e + ri(3) * e * s + &two * s * s - &two * e - &two) / d2 * s * s;
    Ok(Poly::new(vec![a0, a1, a2]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S3Split {
    pub b: Rational,
    pub c: Rational,
    pub e: Rational,
    pub s: Rational,
    /// s first, then the other two roots in increasing order.
    pub roots: [Rational; 3],
}

/// (e, s) of the splitting chart.
pub fn s3_stuv(t: &Rational, y: &Rational) -> Result<(Rational, Rational), SurfaceError> {
    let three = ri(3);
    let ty3 = nz(t * y - &three, "ty-3")?;
    let tmy = nz(t - y, "t-y")?;
    let e = ri(2) * t * (y * y + &three) / (&tmy * &ty3);
    let s = y * (t * t + ri(2) * t * y - &three) / (-&tmy * &ty3);
    Ok((e, s))
}

/// Chart of the locus where the cubic in z splits into three rational roots.
pub fn s3_split_param(t: &Rational, y: &Rational) -> Result<S3Split, SurfaceError> {
    let three = ri(3);
    if (*y == three && *t == ri(-1)) || (*y == ri(-3) && t.is_one()) {
        return Err(SurfaceError::Degenerate("rejectable (b,c)=(0,-1)".into()));
    }
    let d1 = nz(t * t + ri(2) * t * y - &three, "t^2+2ty-3")?;
    let d2 = nz(y * y + ri(2) * t * y - &three, "y^2+2ty-3")?;
    let d3 = nz(y - t, "y-t")?;
    let b = -(t * t + &three) * (y * y + &three) * (t * y + &three) / (&three * &d1 * &d2);
    let c = (y * y + &three) * (t * t * y - &three * y - ri(6) * t) / (&three * &d3 * &d2);
    let (e, s) = s3_stuv(t, y)?;
    let cubic = s3_cubic_in_z(&b, &c);
    if cubic.deg() < 3 {
        return Err(SurfaceError::Degenerate(format!("b = {} drops the cubic degree", fmt_rational(&b))));
    }
    let (quad, rem) = cubic.div_rem(&Poly::linear(-s.clone(), Rational::one()));
    if !rem.is_zero() {
        return Err(SurfaceError::Degenerate("s is not a root of the cubic".into()));
    }
    let (a, b1, c0) = (quad.coeff(2), quad.coeff(1), quad.coeff(0));
    let disc = &b1 * &b1 - ri(4) * &a * &c0;
    let root = sqrt_detect(&disc).ok_or_else(|| SurfaceError::Degenerate("cubic does not split over Q".into()))?;
    let two_a = ri(2) * &a;
    let mut all = [(-&b1 - &root) / &two_a, (-&b1 + &root) / &two_a];
    all.sort();
    let roots = [s.clone(), all[0].clone(), all[1].clone()];
    Ok(S3Split { b, c, e, s, roots })
}

/// (t, y) ↦ ((t−3)/(t+1), (y−3)/(y+1)); moves s to another root.
pub fn s3_root_swap(t: &Rational, y: &Rational) -> Result<(Rational, Rational), SurfaceError> {
    let one = Rational::one();
    let three = ri(3);
    if (t + &one).is_zero() || (y + &one).is_zero() {
        return Err(SurfaceError::PoleOfMap("t = -1 or y = -1".into()));
    }
    Ok(((t - &three) / (t + &one), (y - &three) / (y + &one)))
}

/// (t, y) ↦ (−t, −y); fixes (e, s) and swaps the other two roots.
pub fn s3_central(t: &Rational, y: &Rational) -> (Rational, Rational) {
    (-t.clone(), -y.clone())
}

/// U and V of the cubic pencil U + zV = 0.
pub fn s4_pencil(t: &Rational, y: &Rational) -> (Rational, Rational) {
    let three = ri(3);
    let u = ri(2) * t * t * y - ri(6) * t * t + ri(4) * t * y - &three * y * y + &three * y;
    let v = t * y * y + ri(4) * t * t - ri(2) * t * y + &three * t - ri(6) * y;
    (u, v)
}

/// Rational parametrization of S₄: (t, y) ↦ (b, c, z).
pub fn s4_param(t: &Rational, y: &Rational) -> Result<(Rational, Rational, Rational), SurfaceError> {
    let (u, v) = s4_pencil(t, y);
    let u = nz(u, "U")?;
    let v = nz(v, "V")?;
    let uv = nz(&u + &v, "U+V")?;
    let three = ri(3);
    let z = -&u / &v;
    let b = &three
        * (y * y - ri(2) * t + y)
        * (t * y * y - ri(8) * t * t + ri(4) * t * y - &three * y * y + &three * t + &three * y)
        / (&u * &uv);
    let c =
        -ri(6) * (ri(4) * t * t + ri(2) * t - &three * y - &three) * (t * t * y - t * t + t * y - y * y) / (&v * &uv);
    Ok((b, c, z))
}

pub fn s4_param_inv(b: &Rational, c: &Rational, z: &Rational) -> Result<(Rational, Rational), SurfaceError> {
    let one = Rational::one();
    let two = ri(2);
    let three = ri(3);
    let bz = nz(b * z, "bz")?;
    let bzm = nz(b * (z - &one), "b(z-1)")?;
    let cc = nz(c.clone(), "c")?;
    let czm = nz(c * (z - &one), "c(z-1)")?;
    let bc = b + c;
    let t = &three * (b + &one) / &two - &three * (c + &one) * (c + &two) / (&two * &bz)
        + &three * (&bc + &one) * (&bc + &two) / (&two * &bzm);
    let y = -c + (b + &two) * (b + &three) * z / &cc + (&bc + &two) * (&bc + &three) * z / &czm;
    Ok((t, y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cremona {
    /// (b, c, z) ↦ (c, b, 1/z)
    Sym1,
    /// (b, c, z) ↦ (b, −b−c−3, 1−z)
    Sym2,
}

pub fn s4_cremona(which: Cremona, t: &Rational, y: &Rational) -> Result<(Rational, Rational), SurfaceError> {
    let three = ri(3);
    match which {
        Cremona::Sym1 => {
            let d1 = t * t * y - t * t + t * y - y * y;
            let d2 = t * y * y - ri(8) * t * t + ri(4) * t * y - &three * y * y + &three * t + &three * y;
            if d1.is_zero() || d2.is_zero() {
                return Err(SurfaceError::PoleOfMap("sym1 denominator".into()));
            }
            let t2 = t * (y * y - t * y * y - &three * t + &three * y) / (ri(2) * d1);
            let y2 = (&three - ri(2) * t) * (t * y * y - y * y + &three * t - &three * y) / d2;
            Ok((t2, y2))
        }
        Cremona::Sym2 => {
            let d = t * y - t - &three;
            if d.is_zero() {
                return Err(SurfaceError::PoleOfMap("ty-t-3".into()));
            }
            Ok((t.clone(), (t * y - ri(4) * t * t - &three * t + &three * y) / d))
        }
    }
}
