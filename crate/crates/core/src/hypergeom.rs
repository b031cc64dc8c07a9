//! Terminating Gauss hypergeometric polynomials ₂F₁(−N, b; c; z).
//!
//! A lower parameter that is a nonpositive integer is accepted only when the
//! sum stops before the Pochhammer symbol (c)_k reaches zero; this is the
//! degenerate reading under which ₂F₁(−n, b; −n−m; z) is a polynomial of
//! degree at most n.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{factorial, pochhammer, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergeomError {
    #[error("undefined hypergeometric parameters: lower parameter {0} hits a Pochhammer zero")]
    UndefinedParameters(String),
    #[error("degenerate parameters: pivot denominator vanishes ({0})")]
    DegenerateParameters(String),
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn nonpositive_int(x: &Rational) -> Option<usize> {
    (x.is_integer() && !x.is_positive()).then(|| (-x.to_integer()).to_usize().unwrap_or(usize::MAX))
}

/// ₂F₁(−N, b; c; z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpgSpec {
    pub n: usize,
    pub b: Rational,
    pub c: Rational,
}

impl HpgSpec {
    pub fn new(n: usize, b: Rational, c: Rational) -> Self {
        HpgSpec { n, b, c }
    }

    /// Index of the last term that can be nonzero.
    pub fn effective_degree(&self) -> usize {
        match nonpositive_int(&self.b) {
            Some(k) => k.min(self.n),
            None => self.n,
        }
    }

    pub fn is_defined(&self) -> bool {
        !pochhammer(&self.c, self.effective_degree()).is_zero()
    }
}

/// ₂F₁(−N/2, −(N−1)/2; c; z).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpec {
    pub n: usize,
    pub c: Rational,
}

impl HalfSpec {
    pub fn new(n: usize, c: Rational) -> Self {
        HalfSpec { n, c }
    }
}

pub fn hpg_poly(spec: &HpgSpec) -> Result<Poly<Rational>, HypergeomError> {
    if !spec.is_defined() {
        return Err(HypergeomError::UndefinedParameters(crate::exact::fmt_rational(&spec.c)));
    }
    let top = spec.effective_degree();
    let mut coeffs = Vec::with_capacity(top + 1);
    let mut term = Rational::one();
    coeffs.push(term.clone());
    let n = ri(spec.n as i64);
    for k in 0..top {
        let k_r = ri(k as i64);
        term = term * (&k_r - &n) * (&spec.b + &k_r) / ((&spec.c + &k_r) * (&k_r + Rational::one()));
        coeffs.push(term.clone());
    }
    Ok(Poly::new(coeffs))
}

/// Primitive integer form with positive leading coefficient and the constant
/// `k` such that the polynomial equals `k` times it.
pub fn hpg_poly_cleared(spec: &HpgSpec) -> Result<(Rational, Poly<Rational>), HypergeomError> {
    Ok(hpg_poly(spec)?.primitive())
}

pub fn hpg_half_poly(spec: &HalfSpec) -> Result<Poly<Rational>, HypergeomError> {
    let top = spec.n / 2;
    if pochhammer(&spec.c, top).is_zero() {
        return Err(HypergeomError::UndefinedParameters(crate::exact::fmt_rational(&spec.c)));
    }
    let a = -ri(spec.n as i64) / ri(2);
    let b = -ri(spec.n as i64 - 1) / ri(2);
    let mut coeffs = Vec::with_capacity(top + 1);
    let mut term = Rational::one();
    coeffs.push(term.clone());
    for k in 0..top {
        let k_r = ri(k as i64);
        term = term * (&a + &k_r) * (&b + &k_r) / ((&spec.c + &k_r) * (&k_r + Rational::one()));
        coeffs.push(term.clone());
    }
    Ok(Poly::new(coeffs))
}

pub fn hpg_half_poly_cleared(spec: &HalfSpec) -> Result<(Rational, Poly<Rational>), HypergeomError> {
    Ok(hpg_half_poly(spec)?.primitive())
}

pub fn hpg_eval(spec: &HpgSpec, z: &Rational) -> Result<Rational, HypergeomError> {
    Ok(hpg_poly(spec)?.eval(z))
}

/// Möbius substitutions appearing in the six-term symmetry orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mobius {
    Identity,
    Inverse,
    OneMinus,
    OneMinusInverse,
    OverZMinusOne,
    InverseOneMinus,
}

impl Mobius {
    /// (numerator, denominator) of the substitution as linear polynomials.
    pub fn as_fraction(self) -> (Poly<Rational>, Poly<Rational>) {
        let p = |a: i64, b: i64| Poly::linear(ri(a), ri(b));
        match self {
            Mobius::Identity => (p(0, 1), p(1, 0)),
            Mobius::Inverse => (p(1, 0), p(0, 1)),
            Mobius::OneMinus => (p(1, -1), p(1, 0)),
            Mobius::OneMinusInverse => (p(-1, 1), p(0, 1)),
            Mobius::OverZMinusOne => (p(0, 1), p(-1, 1)),
            Mobius::InverseOneMinus => (p(1, 0), p(1, -1)),
        }
    }

    pub fn apply(self, z: &Rational) -> Option<Rational> {
        let (n, d) = self.as_fraction();
        let dv = d.eval(z);
        (!dv.is_zero()).then(|| n.eval(z) / dv)
    }

    pub fn label(self) -> &'static str {
        match self {
            Mobius::Identity => "z",
            Mobius::Inverse => "1/z",
            Mobius::OneMinus => "1-z",
            Mobius::OneMinusInverse => "1-1/z",
            Mobius::OverZMinusOne => "z/(z-1)",
            Mobius::InverseOneMinus => "1/(1-z)",
        }
    }
}

/// One member of the symmetry orbit: F(z) = constant · Q(z)^N · F'(μ(z)),
/// where μ = P/Q is the Möbius map. `defined` is false when either side has
/// undefined parameters or the normalizing Pochhammer factor vanishes.
#[derive(Debug, Clone)]
pub struct SymmetryImage {
    pub spec: HpgSpec,
    pub map: Mobius,
    pub constant: Rational,
    pub defined: bool,
}

impl SymmetryImage {
    /// Right-hand side expanded as a polynomial in z.
    pub fn expand(&self) -> Option<Poly<Rational>> {
        if !self.defined {
            return None;
        }
        let f = hpg_poly(&self.spec).ok()?;
        let (p, q) = self.map.as_fraction();
        let n = self.spec.n as u32;
        let mut acc = Poly::zero();
        for (k, a) in f.coeffs().iter().enumerate() {
            let term = &p.pow(k as u32) * &q.pow(n - k as u32);
            acc = &acc + &term.scale(a);
        }
        Some(acc.scale(&self.constant))
    }

    /// Whether the identity holds exactly for this spec.
    pub fn holds(&self, original: &HpgSpec) -> bool {
        match (self.expand(), hpg_poly(original)) {
            (Some(rhs), Ok(lhs)) => rhs == lhs,
            _ => false,
        }
    }
}

/// The six-element orbit of ₂F₁(−N, b; C; z) under b ↔ c exchange and the
/// anharmonic group, with c = 1 − N − C and e = −b − c + 1 − N.
///
/// The 1 − z and 1 − 1/z images carry (b+c)_N and (b+c)_N·z^N with no
/// (−1)^N sign; the signed variants fail at z = 1 by Chu–Vandermonde.
pub fn symmetry_images(spec: &HpgSpec) -> Vec<SymmetryImage> {
    let n = spec.n;
    let nn = ri(n as i64);
    let b = spec.b.clone();
    let c = Rational::one() - &nn - &spec.c;
    let e = -&b - &c + Rational::one() - &nn;
    let cn = pochhammer(&c, n);
    let bn = pochhammer(&b, n);
    let bcn = pochhammer(&(&b + &c), n);
    let sign = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let lower_b = Rational::one() - &nn - &b;
    let base = !cn.is_zero() && spec.is_defined();
    let mk = |s: HpgSpec, map: Mobius, num: Rational| {
        let defined = base && s.is_defined();
        let constant = if base { num / &cn } else { Rational::zero() };
        SymmetryImage { spec: s, map, constant, defined }
    };
    vec![
        mk(spec.clone(), Mobius::Identity, cn.clone()),
        mk(HpgSpec::new(n, c.clone(), lower_b.clone()), Mobius::Inverse, bn.clone()),
        mk(HpgSpec::new(n, b.clone(), &b + &c), Mobius::OneMinus, bcn.clone()),
        mk(HpgSpec::new(n, c.clone(), &b + &c), Mobius::OneMinusInverse, bcn),
        mk(HpgSpec::new(n, e.clone(), spec.c.clone()), Mobius::OverZMinusOne, &sign * &cn),
        mk(HpgSpec::new(n, e, lower_b), Mobius::InverseOneMinus, &sign * &bn),
    ]
}

/// Which sequence of lemma polynomials a recurrence step refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// P(k) = ₂F₁(−k, b; 1−k−c; z)
    Integer,
    /// P(k) = ₂F₁(−k/2, −(k−1)/2; 1−k−c; z)
    Half,
}

/// P(k) of the given family, built directly from the series.
pub fn lemma_poly(family: Family, k: usize, b: &Rational, c: &Rational) -> Result<Poly<Rational>, HypergeomError> {
    let lower = Rational::one() - ri(k as i64) - c;
    match family {
        Family::Integer => hpg_poly(&HpgSpec::new(k, b.clone(), lower)),
        Family::Half => hpg_half_poly(&HalfSpec::new(k, lower)),
    }
}

/// P(k+1) from P(k) and P(k−1) by the three-term contiguous relation.
pub fn contiguous_step(
    family: Family,
    k: usize,
    b: &Rational,
    c: &Rational,
    pk: &Poly<Rational>,
    pkm1: &Poly<Rational>,
) -> Result<Poly<Rational>, HypergeomError> {
    let kr = ri(k as i64);
    let z = Poly::<Rational>::x();
    match family {
        Family::Integer => {
            let d1 = &kr - Rational::one() + c;
            let d2 = &kr + c;
            if d1.is_zero() || d2.is_zero() {
                return Err(HypergeomError::DegenerateParameters(format!("k-1+c = {d1}, k+c = {d2}")));
            }
            let w = &kr * (&kr - Rational::one() + b + c) / d1;
            let lin = Poly::linear(&kr + c, &kr + b);
            let rhs = &(&lin * pk) - &(&z * pkm1).scale(&w);
            Ok(rhs.scale(&(Rational::one() / d2)))
        }
        Family::Half => {
            let den = ri(4) * (c + &kr) * (c + &kr - Rational::one());
            if den.is_zero() {
                return Err(HypergeomError::DegenerateParameters(format!("4(c+k)(c+k-1) = {den}")));
            }
            let w = &kr * (ri(2) * c + &kr - Rational::one()) / den;
            Ok(pk - &(&z * pkm1).scale(&w))
        }
    }
}

/// P(0), …, P(k) generated by repeated contiguous steps.
pub fn lemma_sequence(
    family: Family,
    k: usize,
    b: &Rational,
    c: &Rational,
) -> Result<Vec<Poly<Rational>>, HypergeomError> {
    let mut out = vec![Poly::one()];
    if k == 0 {
        return Ok(out);
    }
    out.push(lemma_poly(family, 1, b, c)?);
    for j in 1..k {
        let next = contiguous_step(family, j, b, c, &out[j], &out[j - 1])?;
        out.push(next);
    }
    Ok(out)
}

/// P(k) at z = 1 by Chu–Vandermonde.
pub fn value_at_one(family: Family, k: usize, b: &Rational, c: &Rational) -> Result<Rational, HypergeomError> {
    let (num, den) = match family {
        Family::Integer => (pochhammer(&(b + c), k), pochhammer(c, k)),
        Family::Half => {
            let fl = k / 2;
            let ce = k.div_ceil(2);
            (pochhammer(&(c + Rational::new(BigInt::one(), BigInt::from(2))), fl), pochhammer(&(c + ri(ce as i64)), fl))
        }
    };
    if den.is_zero() {
        return Err(HypergeomError::DegenerateParameters("Pochhammer denominator".into()));
    }
    Ok(num / den)
}

/// Krawtchouk polynomial K_n(x; p, N) = ₂F₁(−n, −x; −N; 1/p).
pub fn krawtchouk(n: usize, x: usize, p: &Rational, big_n: i64) -> Result<Rational, HypergeomError> {
    if p.is_zero() {
        return Err(HypergeomError::DegenerateParameters("p = 0".into()));
    }
    let spec = HpgSpec::new(n, -ri(x as i64), -ri(big_n));
    hpg_eval(&spec, &(Rational::one() / p))
}

/// Both sides of ₂F₁(−m, −n; M; 1 − 1/p) = (M+m)_n/(M)_n · K_n(m; p, M+m+n−1).
pub fn krawtchouk_bridge(m: usize, n: usize, big_m: i64, p: &Rational) -> Result<(Rational, Rational), HypergeomError> {
    if p.is_zero() {
        return Err(HypergeomError::DegenerateParameters("p = 0".into()));
    }
    let lhs = hpg_eval(&HpgSpec::new(m, -ri(n as i64), ri(big_m)), &(Rational::one() - Rational::one() / p))?;
    let mm = ri(big_m);
    let den = pochhammer(&mm, n);
    if den.is_zero() {
        return Err(HypergeomError::DegenerateParameters("(M)_n = 0".into()));
    }
    let pref = pochhammer(&(&mm + ri(m as i64)), n) / den;
    let k = krawtchouk(n, m, p, big_m + m as i64 + n as i64 - 1)?;
    Ok((lhs, pref * k))
}

/// k-th coefficient of ₂F₁(a, b; c; z) for arbitrary rational parameters.
pub fn series_coeff(a: &Rational, b: &Rational, c: &Rational, k: usize) -> Option<Rational> {
    let den = pochhammer(c, k) * factorial::<Rational>(k);
    (!den.is_zero()).then(|| pochhammer(a, k) * pochhammer(b, k) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&rat(7, 3), 0), int(1));
        assert_eq!(pochhammer(&int(3), 4), int(360));
        assert_eq!(pochhammer(&int(-4), 5), int(0));
    }

    #[test]
    fn integer_zeros() {
        for (n, b, c) in [(7, -3, 13), (10, -4, 4), (7, -4, 7)] {
            let s = HpgSpec::new(n, int(b), int(c));
            assert!(hpg_eval(&s, &int(-1)).unwrap().is_zero(), "{n} {b} {c}");
        }
    }

    #[test]
    fn chu_vandermonde_direct() {
        let s = HpgSpec::new(2, int(1), int(3));
        assert_eq!(hpg_eval(&s, &int(1)).unwrap(), rat(1, 2));
        assert_eq!(pochhammer(&int(2), 2) / pochhammer(&int(3), 2), rat(1, 2));
    }

    #[test]
    fn undefined_lower() {
        let s = HpgSpec::new(3, int(1), int(-2));
        assert!(matches!(hpg_poly(&s), Err(HypergeomError::UndefinedParameters(_))));
    }

    #[test]
    fn degenerate_reading() {
        let s = HpgSpec::new(2, int(3), int(-5));
        assert_eq!(hpg_poly(&s).unwrap().deg(), 2);
        let s = HpgSpec::new(4, int(-2), int(-3));
        assert_eq!(hpg_poly(&s).unwrap().deg(), 2);
    }

    #[test]
    fn half_examples() {
        assert_eq!(hpg_half_poly(&HalfSpec::new(1, int(5))).unwrap(), Poly::one());
        let p = hpg_half_poly(&HalfSpec::new(8, int(-17))).unwrap();
        assert_eq!(p.deg(), 4);
        assert!(p.eval(&int(4)).is_zero());
        let q = hpg_half_poly(&HalfSpec::new(2, int(1))).unwrap();
        assert_eq!(q, Poly::new(vec![int(1), rat(1, 2)]));
        assert!(q.eval(&int(-2)).is_zero());
    }

    #[test]
    fn swap_symmetry_numeric() {
        let s = HpgSpec::new(2, int(1), int(-3));
        let imgs = symmetry_images(&s);
        assert_eq!(imgs.len(), 6);
        let lhs = pochhammer(&int(2), 2) * hpg_eval(&s, &int(3)).unwrap();
        assert_eq!(lhs, int(36));
        let sw = &imgs[1];
        assert_eq!(sw.map, Mobius::Inverse);
        let rhs = pochhammer(&int(1), 2) * int(9) * hpg_eval(&sw.spec, &rat(1, 3)).unwrap();
        assert_eq!(rhs, int(36));
        assert!(imgs.iter().all(|i| i.holds(&s)));
    }

    #[test]
    fn mobius_inverse_involution() {
        let z = int(1);
        let w = Mobius::Inverse.apply(&Mobius::Inverse.apply(&z).unwrap()).unwrap();
        assert_eq!(w, z);
        assert_eq!(Mobius::OneMinus.apply(&rat(2, 7)), Some(rat(5, 7)));
        assert_eq!(Mobius::InverseOneMinus.apply(&int(1)), None);
    }

    #[test]
    fn orbit_identities_cubic() {
        let s = HpgSpec::new(3, int(-7), rat(5, 3));
        for img in symmetry_images(&s) {
            assert!(img.defined, "{}", img.map.label());
            assert!(img.holds(&s), "{}", img.map.label());
        }
    }

    #[test]
    fn recurrence_example() {
        let (b, c) = (int(2), int(3));
        let p0 = Poly::one();
        let p1 = lemma_poly(Family::Integer, 1, &b, &c).unwrap();
        assert_eq!(p1.eval(&int(1)), rat(5, 3));
        let p2 = contiguous_step(Family::Integer, 1, &b, &c, &p1, &p0).unwrap();
        assert_eq!(p2.eval(&int(1)), rat(5, 2));
        assert_eq!(p2, lemma_poly(Family::Integer, 2, &b, &c).unwrap());
        assert_eq!(value_at_one(Family::Integer, 2, &b, &c).unwrap(), rat(5, 2));
        assert_eq!(value_at_one(Family::Integer, 0, &b, &c).unwrap(), int(1));
    }

    #[test]
    fn half_recurrence_and_value() {
        let c = rat(2, 7);
        let seq = lemma_sequence(Family::Half, 7, &int(0), &c).unwrap();
        for (k, p) in seq.iter().enumerate() {
            assert_eq!(p, &lemma_poly(Family::Half, k, &int(0), &c).unwrap());
            assert_eq!(p.eval(&int(1)), value_at_one(Family::Half, k, &int(0), &c).unwrap());
        }
        assert_eq!(value_at_one(Family::Half, 2, &int(0), &int(1)).unwrap(), rat(3, 4));
    }

    #[test]
    fn degenerate_pivot() {
        let p = Poly::one();
        let r = contiguous_step(Family::Integer, 1, &int(1), &int(0), &p, &p);
        assert!(matches!(r, Err(HypergeomError::DegenerateParameters(_))));
        let r = contiguous_step(Family::Half, 1, &int(1), &int(-1), &p, &p);
        assert!(matches!(r, Err(HypergeomError::DegenerateParameters(_))));
    }

    #[test]
    fn krawtchouk_basics() {
        assert_eq!(krawtchouk(0, 5, &rat(1, 3), 9).unwrap(), int(1));
        assert_eq!(krawtchouk(4, 0, &rat(1, 3), 9).unwrap(), int(1));
        let (lhs, rhs) = krawtchouk_bridge(7, 3, 13, &rat(1, 2)).unwrap();
        assert!(lhs.is_zero());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pfaff_euler_caveat() {
        // Euler's transformation applied blindly to ₂F₁(−1, 1; −2; z):
        // the right side (1−z)^{−2}·₂F₁(−1, −3; −2; z) is not even a polynomial.
        let lhs = hpg_poly(&HpgSpec::new(1, int(1), int(-2))).unwrap();
        let euler = hpg_poly(&HpgSpec::new(1, int(-3), int(-2))).unwrap();
        let one_minus_z_sq = Poly::from_ints(&[1, -2, 1]);
        assert_ne!(&lhs * &one_minus_z_sq, euler);

        // With a, b, c all nonpositive and −c ≥ max(−a, −b) Pfaff holds:
        // ₂F₁(−1, −2; −3; z) = (1−z)·₂F₁(−1, −1; −3; z/(z−1)).
        let lhs = hpg_poly(&HpgSpec::new(1, int(-2), int(-3))).unwrap();
        let inner = hpg_poly(&HpgSpec::new(1, int(-1), int(-3))).unwrap();
        let rhs =
            &(Poly::from_ints(&[1, -1]).scale(&inner.coeff(0))) + &Poly::from_ints(&[0, -1]).scale(&inner.coeff(1));
        assert_eq!(lhs, rhs);
    }
}
