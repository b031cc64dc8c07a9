use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::Poly;
use super::scalar::{Rational, Scalar};
use super::ExactError;

/// Outcome of [`split_roots`]. The input equals
/// `constant · Π (x − rᵢ)^{kᵢ} · Π qⱼ^{kⱼ} · residual`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSplit {
    /// Distinct rational roots with multiplicity, ascending.
    pub rational_roots: Vec<(Rational, usize)>,
    /// Monic irreducible quadratics with multiplicity.
    pub quadratic_factors: Vec<(Poly<Rational>, usize)>,
    /// Monic remainder without rational roots (1 when fully split).
    pub residual: Poly<Rational>,
    pub constant: Rational,
}

impl RootSplit {
    /// Rebuilds the input polynomial.
    pub fn product(&self) -> Poly<Rational> {
        let mut acc = Poly::constant(self.constant.clone());
        for (r, k) in &self.rational_roots {
            acc = &acc * &Poly::linear(-r.clone(), Rational::one()).pow(*k as u32);
        }
        for (q, k) in &self.quadratic_factors {
            acc = &acc * &q.pow(*k as u32);
        }
        &acc * &self.residual
    }

    /// Distinct roots over the algebraic closure accounted for by explicit factors.
    pub fn explicit_root_count(&self) -> usize {
        self.rational_roots.len() + 2 * self.quadratic_factors.len()
    }
}

/// Splits a nonzero rational polynomial into rational roots, irreducible
/// quadratic factors and an unresolved residual.
pub fn split_roots(p: &Poly<Rational>) -> RootSplit {
    assert!(!p.is_zero(), "split_roots of the zero polynomial");
    let constant = p.lc();
    let mut rest = p.monic();
    let mut rational_roots = Vec::new();
    for r in rational_root_candidates(&rest) {
        let (k, q) = rest.strip_root(&r);
        if k > 0 {
            rational_roots.push((r, k));
            rest = q;
        }
    }
    rational_roots.sort_by(|a, b| a.0.cmp(&b.0));
    let mut quadratic_factors: Vec<(Poly<Rational>, usize)> = Vec::new();
    loop {
        match rest.deg() {
            0 | 1 | 3 => break,
            2 => {
                quadratic_factors.push((rest.clone(), 1));
                rest = Poly::one();
                break;
            }
            _ => match find_quadratic_factor(&rest) {
                Some(q) => {
                    let mut k = 0;
                    while let Some(next) = rest.exact_div(&q) {
                        rest = next;
                        k += 1;
                    }
                    quadratic_factors.push((q, k));
                }
                None => break,
            },
        }
    }
    // A repeated quadratic shows up again as an identical factor; merge.
    let mut merged: Vec<(Poly<Rational>, usize)> = Vec::new();
    for (q, k) in quadratic_factors {
        match merged.iter_mut().find(|(m, _)| *m == q) {
            Some(e) => e.1 += k,
            None => merged.push((q, k)),
        }
    }
    merged.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()));
    RootSplit { rational_roots, quadratic_factors: merged, residual: rest, constant }
}

/// All rational roots of a monic rational polynomial (each once).
fn rational_root_candidates(p: &Poly<Rational>) -> Vec<Rational> {
    let mut out = Vec::new();
    let (_, prim) = p.primitive();
    let mut q = prim;
    if q.deg() == 0 {
        return out;
    }
    if let Some(z) = q.ord0() {
        if z > 0 {
            out.push(Rational::zero());
            q = Poly::new(q.coeffs()[z..].to_vec());
        }
    }
    if q.deg() == 0 {
        return out;
    }
    let sq = q.gcd(&q.derivative());
    let (_, sqf) = q.exact_div(&sq).expect("squarefree part").primitive();
    let ints = sqf.integer_coeffs().expect("primitive integer form");
    let n = ints.len() - 1;
    let an = ints[n].clone();
    // y = a_n·x makes it monic: coefficient of y^i is a_i · a_n^{n−1−i}.
    let monic = {
        let mut v: Vec<BigInt> =
            ints[..n].iter().enumerate().map(|(i, a)| a * num_traits::pow(an.clone(), n - 1 - i)).collect();
        v.push(BigInt::one());
        v
    };
    let mp = Poly::new(monic.iter().map(|c| Rational::from_integer(c.clone())).collect());
    let bound = monic.iter().take(n).map(|c| c.abs()).max().unwrap_or_default() + 1u32;
    for y in integer_roots(&mp, &bound) {
        out.push(Rational::new(y, an.clone()));
    }
    out
}

fn sturm_chain(p: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let r = chain[n - 2].div_rem(&chain[n - 1]).1;
        if r.is_zero() {
            break;
        }
        // Positive rescaling keeps signs and tames coefficient growth.
        let (k, prim) = r.primitive();
        chain.push(if k.is_positive() { -prim } else { prim });
    }
    chain
}

fn sign_changes(chain: &[Poly<Rational>], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for f in chain {
        let v = f.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Integer roots of a monic squarefree integer polynomial with |roots| < bound.
/// Sturm counts at half-integers (never roots) drive an integer bisection.
fn integer_roots(p: &Poly<Rational>, bound: &BigInt) -> Vec<BigInt> {
    let chain = sturm_chain(p);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let at = |k: &BigInt| sign_changes(&chain, &(Rational::from_integer(k.clone()) + half.clone()));
    let mut out = Vec::new();
    // Each interval [lo, hi] stands for the open real interval (lo − 1/2, hi + 1/2).
    let mut stack = vec![(-bound.clone(), bound.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let count = at(&(&lo - 1u32)) as i64 - at(&hi) as i64;
        if count <= 0 {
            continue;
        }
        if lo == hi {
            if p.eval(&Rational::from_integer(lo.clone())).is_zero() {
                out.push(lo);
            }
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((&mid + 1u32, hi));
        stack.push((lo, mid));
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn add(self, o: C64) -> C64 {
        C64 { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: C64) -> C64 {
        C64 { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: C64) -> C64 {
        C64 { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64 { re: (self.re * o.re + self.im * o.im) / n, im: (self.im * o.re - self.re * o.im) / n }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Complex roots of a monic polynomial by Durand–Kerner iteration.
fn numeric_roots(p: &Poly<Rational>) -> Option<Vec<C64>> {
    let n = p.deg();
    let c: Vec<f64> = p.coeffs().iter().map(|x| x.to_f64()).collect::<Option<Vec<_>>>()?;
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let radius = 1.0 + c.iter().take(n).fold(0.0f64, |m, x| m.max(x.abs()));
    let seed = C64 { re: 0.4, im: 0.9 };
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.25;
            C64 { re: radius.min(1e6) * t.cos(), im: radius.min(1e6) * t.sin() }.add(seed)
        })
        .collect();
    let eval = |x: C64| {
        let mut acc = C64 { re: 0.0, im: 0.0 };
        for a in c.iter().rev() {
            acc = acc.mul(x).add(C64 { re: *a, im: 0.0 });
        }
        acc
    };
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C64 { re: 1.0, im: 0.0 };
            for j in 0..n {
                if i != j {
                    den = den.mul(z[i].sub(z[j]));
                }
            }
            if den.abs() == 0.0 {
                return None;
            }
            let step = eval(z[i]).div(den);
            z[i] = z[i].sub(step);
            delta = delta.max(step.abs() / (1.0 + z[i].abs()));
        }
        if delta < 1e-15 {
            break;
        }
    }
    z.iter().all(|w| w.re.is_finite() && w.im.is_finite()).then_some(z)
}

fn round_big(x: f64) -> Option<BigInt> {
    if !x.is_finite() || x.abs() > 9.0e15 {
        return None;
    }
    Some(BigInt::from(x.round() as i64))
}

/// Tries every root pair as a rational quadratic factor; confirmed by exact division.
fn find_quadratic_factor(p: &Poly<Rational>) -> Option<Poly<Rational>> {
    let (_, prim) = p.primitive();
    let an = prim.lc().to_integer();
    let anf = an.to_f64()?;
    let z = numeric_roots(p)?;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            let s = z[i].add(z[j]);
            let t = z[i].mul(z[j]);
            if s.im.abs() > 1e-6 * (1.0 + s.re.abs()) || t.im.abs() > 1e-6 * (1.0 + t.re.abs()) {
                continue;
            }
            let (Some(sn), Some(tn)) = (round_big(s.re * anf), round_big(t.re * anf)) else {
                continue;
            };
            let q = Poly::new(vec![Rational::new(tn, an.clone()), -Rational::new(sn, an.clone()), Rational::one()]);
            if p.exact_div(&q).is_some() {
                return Some(q);
            }
        }
    }
    None
}

/// The two roots of a monic irreducible quadratic x² + bx + c in ℚ(√d).
pub fn quadratic_roots(q: &Poly<Rational>) -> Result<(Scalar, Scalar), ExactError> {
    if q.deg() != 2 {
        return Err(ExactError::NotQuadratic);
    }
    let q = q.monic();
    let b = q.coeff(1);
    let c = q.coeff(0);
    let disc = &b * &b - Rational::from_integer(BigInt::from(4)) * &c;
    let root = Scalar::sqrt_rational(&disc)?;
    if root.field().is_none() {
        return Err(ExactError::NotIrreducible);
    }
    let half = Scalar::Rat(Rational::new(BigInt::one(), BigInt::from(2)));
    let re = Scalar::Rat(-(b / Rational::from_integer(BigInt::from(2))));
    let h = &root * &half;
    Ok((&re + &h, &re - &h))
}
