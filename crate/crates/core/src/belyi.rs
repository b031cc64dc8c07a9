//! Belyi maps φ = (1−x)^p (1−λx)^q G_m^r and φ = (1+αx+βx²)^p G_m^r with
//! φ = 1 + O(x^{m+2}).
//!
//! Maps are stored unscaled: the distinguished linear factor is 1 − x and
//! G(0) = 1. [`BelyiMap::canonical_scale`] gives the x-scaling that makes
//! every factor integral, for display only.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{
    factorial, field_label, format_poly, pochhammer, quadratic_roots, series_binomial_pow, split_roots, ExactError,
    Poly, Rational, Scalar, Series,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BelyiError {
    #[error("degenerate input: {0}")]
    InputDegenerate(String),
    #[error("degenerate root: {0}")]
    DegenerateRoot(String),
    #[error("every candidate collapses to the constant map")]
    AllDegenerate,
    #[error("malformed map record: {0}")]
    Record(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn frac(p: i64, r: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(r))
}

fn sc(n: i64) -> Scalar {
    Scalar::from_int(n)
}

/// (−a)_k/k! style coefficients a_k = (c)_k / k! for k < t.
fn binomial_coeffs(c: &Rational, t: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(t);
    let mut acc = Rational::one();
    for k in 0..t {
        if k > 0 {
            acc = acc * (c + ri(k as i64 - 1)) / ri(k as i64);
        }
        out.push(acc.clone());
    }
    out
}

/// Coefficients of (1−x)^{−p/r}(1−λx)^{−q/r} mod x^T:
/// h_k = Σ_j (p/r)_{k−j} (q/r)_j λ^j / ((k−j)! j!).
pub fn h_series(p: i64, q: i64, r: i64, lambda: &Scalar, t: usize) -> Series<Scalar> {
    assert!(r != 0, "r must be nonzero");
    let a = binomial_coeffs(&frac(p, r), t);
    let b = binomial_coeffs(&frac(q, r), t);
    let mut lp = Vec::with_capacity(t);
    let mut acc = Scalar::one();
    for _ in 0..t {
        lp.push(acc.clone());
        acc = &acc * lambda;
    }
    let mut out = Vec::with_capacity(t);
    for k in 0..t {
        let mut s = Scalar::zero();
        for j in 0..=k {
            let c = &a[k - j] * &b[j];
            if c.is_zero() {
                continue;
            }
            s = &s + &(&Scalar::Rat(c) * &lp[j]);
        }
        out.push(s);
    }
    Series::new(out, t)
}

/// h_k as a polynomial in λ.
pub fn h_poly(p: i64, q: i64, r: i64, k: usize) -> Poly<Rational> {
    let a = binomial_coeffs(&frac(p, r), k + 1);
    let b = binomial_coeffs(&frac(q, r), k + 1);
    Poly::new((0..=k).map(|j| &a[k - j] * &b[j]).collect())
}

/// Coefficients of (1+αx+βx²)^{−p/r} mod x^T.
pub fn g_series(p: i64, r: i64, alpha: &Scalar, beta: &Scalar, t: usize) -> Series<Scalar> {
    assert!(r != 0, "r must be nonzero");
    series_binomial_pow(alpha, beta, &frac(-p, r), t)
}

/// g_k at α = 1, β = z/4 as a polynomial in z = 4β/α².
pub fn g_poly_z(p: i64, r: i64, k: usize) -> Poly<Rational> {
    let c = frac(p, r);
    let mut coeffs = Vec::with_capacity(k / 2 + 1);
    for j in 0..=k / 2 {
        let mut t =
            pochhammer(&c, k - j) / (factorial::<Rational>(k - 2 * j) * factorial::<Rational>(j) * ri(4).pow(j as i32));
        if (k - j) % 2 == 1 {
            t = -t;
        }
        coeffs.push(t);
    }
    Poly::new(coeffs)
}

/// Which degeneration of the parameter polynomial applies.
///
/// `LambdaPowerFactor(ℓ)` is the root 0 of the parameter polynomial
/// (λ = 0 for the two-linear form, β = 0 for the quadratic form).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "l", rename_all = "snake_case")]
pub enum Degeneracy {
    Generic,
    NoMaps,
    ReducedDegree(u32),
    LambdaPowerFactor(u32),
    OneMinusLambdaFactor(u32),
    SquareRootFactor(u32),
    AlphaZeroOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyReport {
    #[serde(flatten)]
    pub class: Degeneracy,
    pub expected_count: usize,
}

/// ℓ with x = −ℓ and lo ≤ ℓ ≤ hi.
fn neg_int_in(x: &Rational, lo: i64, hi: i64) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    let l = (-x.to_integer()).to_i64()?;
    (lo <= l && l <= hi).then_some(l)
}

/// Number of maps of the two-linear form predicted from the Pochhammer
/// zeros of p/r, q/r and (p+q)/r alone.
pub fn classify_form11(p: i64, q: i64, r: i64, m: usize) -> DegeneracyReport {
    let mi = m as i64;
    let c = frac(p, r);
    let b = frac(q, r);
    let s = frac(p + q, r);
    let l1 = neg_int_in(&c, 1, mi);
    let l2 = neg_int_in(&b, 1, mi);
    let ls = neg_int_in(&s, 0, mi);
    if let (Some(a), Some(bb)) = (l1, l2) {
        if a + bb <= mi {
            return DegeneracyReport { class: Degeneracy::NoMaps, expected_count: 0 };
        }
    }
    let degree = l2.unwrap_or(mi + 1);
    let at_zero = l1.map_or(0, |l| mi + 1 - l);
    let at_one = ls.map_or(0, |l| l + 1);
    let expected_count = (degree - at_zero - at_one).max(0) as usize;
    let class = if let Some(l) = l2 {
        Degeneracy::ReducedDegree(l as u32)
    } else if let Some(l) = l1 {
        Degeneracy::LambdaPowerFactor(l as u32)
    } else if let Some(l) = ls {
        Degeneracy::OneMinusLambdaFactor(l as u32)
    } else {
        Degeneracy::Generic
    };
    DegeneracyReport { class, expected_count }
}

/// Number of maps of the quadratic form, the α = 0 map included.
pub fn classify_form2(p: i64, r: i64, m: usize) -> DegeneracyReport {
    let mi = m as i64;
    let c = frac(p, r);
    let half_up = |k: i64| (k + 1).div_euclid(2);
    if let Some(l) = neg_int_in(&c, 1, mi) {
        if l <= mi / 2 {
            return DegeneracyReport { class: Degeneracy::NoMaps, expected_count: 0 };
        }
        return DegeneracyReport {
            class: Degeneracy::LambdaPowerFactor(l as u32),
            expected_count: (l - half_up(mi)) as usize,
        };
    }
    let c2 = &c * ri(2);
    if let Some(l) = neg_int_in(&c2, 1, mi) {
        if l % 2 == 1 {
            return match mi - l {
                0 => DegeneracyReport { class: Degeneracy::NoMaps, expected_count: 0 },
                1 => DegeneracyReport { class: Degeneracy::AlphaZeroOnly, expected_count: 1 },
                k => DegeneracyReport {
                    class: Degeneracy::SquareRootFactor(l as u32),
                    expected_count: half_up(k) as usize,
                },
            };
        }
    }
    DegeneracyReport { class: Degeneracy::Generic, expected_count: half_up(mi + 1) as usize }
}

fn check_form11(p: i64, q: i64, r: i64, m: usize) -> Result<(), BelyiError> {
    let bad = |s: &str| Err(BelyiError::InputDegenerate(s.to_string()));
    if r == 0 {
        return bad("r = 0");
    }
    if p == 0 || q == 0 {
        return bad("p and q must be nonzero; a zero power gives the (1-x^(m+2))^r family");
    }
    if p + q + m as i64 * r == 0 {
        return bad("p + q + m*r = 0 leaves x = infinity off the fibers 0 and infinity");
    }
    Ok(())
}

fn check_form2(p: i64, r: i64, m: usize) -> Result<(), BelyiError> {
    let bad = |s: &str| Err(BelyiError::InputDegenerate(s.to_string()));
    if r == 0 {
        return bad("r = 0");
    }
    if p == 0 {
        return bad("p = 0 gives the (1-x^(m+2))^r family");
    }
    if p == r {
        return bad("p = r gives the (1-x^(m+2))^p family");
    }
    if 2 * p + m as i64 * r == 0 {
        return bad("2p + m*r = 0 leaves x = infinity off the fibers 0 and infinity");
    }
    Ok(())
}

/// Roots of a rational polynomial with 0 and 1 removed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamRoots {
    /// Distinct explicit roots, sorted.
    pub roots: Vec<Scalar>,
    /// Factor of degree ≥ 3 without rational roots or quadratic factors.
    pub unresolved: Poly<Rational>,
    /// Multiplicities of the stripped roots 0 and 1.
    pub mult_zero: usize,
    pub mult_one: usize,
}

impl ParamRoots {
    /// Distinct roots over the algebraic closure outside {0, 1}.
    pub fn distinct_count(&self) -> usize {
        self.roots.len() + self.unresolved.distinct_root_count()
    }
}

fn param_roots(f: &Poly<Rational>) -> Result<ParamRoots, BelyiError> {
    if f.is_zero() {
        return Ok(ParamRoots { roots: vec![], unresolved: Poly::one(), mult_zero: 0, mult_one: 0 });
    }
    let (mult_zero, rest) = f.strip_root(&Rational::zero());
    let (mult_one, rest) = rest.strip_root(&Rational::one());
    let split = split_roots(&rest);
    let mut roots: Vec<Scalar> = split.rational_roots.iter().map(|(x, _)| Scalar::Rat(x.clone())).collect();
    for (qf, _) in &split.quadratic_factors {
        let (a, b) = quadratic_roots(qf)?;
        roots.push(a);
        roots.push(b);
    }
    roots.sort();
    Ok(ParamRoots { roots, unresolved: split.residual, mult_zero, mult_one })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form11Solution {
    pub p: i64,
    pub q: i64,
    pub r: i64,
    pub m: usize,
    /// h_{m+1} as a polynomial in λ.
    pub polynomial: Poly<Rational>,
    pub roots: ParamRoots,
    pub report: DegeneracyReport,
}

/// λ-values with h_{m+1}(λ) = 0 and λ ∉ {0, 1}.
///
/// Inputs in the region p = −ℓ₁r, q = −ℓ₂r, ℓ₁ + ℓ₂ ≤ m report `NoMaps`
/// before the p + q + mr ≠ 0 check, since ℓ₁ + ℓ₂ = m lies on that line.
pub fn solve_form11(p: i64, q: i64, r: i64, m: usize) -> Result<Form11Solution, BelyiError> {
    if r != 0 && p != 0 && q != 0 {
        let report = classify_form11(p, q, r, m);
        if report.class == Degeneracy::NoMaps {
            let empty = ParamRoots { roots: vec![], unresolved: Poly::one(), mult_zero: 0, mult_one: 0 };
            return Ok(Form11Solution { p, q, r, m, polynomial: h_poly(p, q, r, m + 1), roots: empty, report });
        }
    }
    check_form11(p, q, r, m)?;
    let report = classify_form11(p, q, r, m);
    let polynomial = h_poly(p, q, r, m + 1);
    let roots = param_roots(&polynomial)?;
    Ok(Form11Solution { p, q, r, m, polynomial, roots, report })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Form2Solution {
    pub p: i64,
    pub r: i64,
    pub m: usize,
    /// g_{m+1}(1, z/4) as a polynomial in z.
    pub polynomial: Poly<Rational>,
    pub z_roots: ParamRoots,
    pub alpha_zero_map: bool,
    pub report: DegeneracyReport,
}

impl Form2Solution {
    pub fn map_count(&self) -> usize {
        self.z_roots.distinct_count() + usize::from(self.alpha_zero_map)
    }
}

/// z = 4β/α² with g_{m+1} = 0 and z ∉ {0, 1}, plus the α = 0 map for even m.
pub fn solve_form2(p: i64, r: i64, m: usize) -> Result<Form2Solution, BelyiError> {
    check_form2(p, r, m)?;
    let polynomial = g_poly_z(p, r, m + 1);
    let z_roots = param_roots(&polynomial)?;
    let report = classify_form2(p, r, m);
    let alpha_zero_map = m.is_multiple_of(2) && report.class != Degeneracy::NoMaps;
    Ok(Form2Solution { p, r, m, polynomial, z_roots, alpha_zero_map, report })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapForm {
    TwoLinear { p: i64, q: i64, r: i64, lambda: Scalar },
    OneQuadratic { p: i64, r: i64, alpha: Scalar, beta: Scalar },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BelyiMap {
    pub form: MapForm,
    pub m: usize,
    pub g: Poly<Scalar>,
}

fn truncated_g(s: &Series<Scalar>, m: usize) -> Result<Poly<Scalar>, BelyiError> {
    let g = s.to_poly().truncate(m + 1);
    if g.degree() != Some(m) {
        return Err(BelyiError::DegenerateRoot(format!("G has degree {:?} instead of {}", g.degree(), m)));
    }
    Ok(g)
}

/// The map of the two-linear form through λ.
pub fn assemble_form11(p: i64, q: i64, r: i64, m: usize, lambda: &Scalar) -> Result<BelyiMap, BelyiError> {
    check_form11(p, q, r, m)?;
    if lambda.is_zero() || lambda.is_one() {
        return Err(BelyiError::DegenerateRoot(format!("lambda = {}", lambda)));
    }
    let g = truncated_g(&h_series(p, q, r, lambda, m + 1), m)?;
    if g.eval(&Scalar::one()).is_zero() || g.eval(&lambda.inv()?).is_zero() {
        return Err(BelyiError::DegenerateRoot("G vanishes at x = 1 or x = 1/lambda".into()));
    }
    Ok(BelyiMap { form: MapForm::TwoLinear { p, q, r, lambda: lambda.clone() }, m, g })
}

/// The map of the quadratic form with H₂ = 1 + αx + βx².
pub fn assemble_form2(p: i64, r: i64, m: usize, alpha: &Scalar, beta: &Scalar) -> Result<BelyiMap, BelyiError> {
    check_form2(p, r, m)?;
    if beta.is_zero() {
        return Err(BelyiError::DegenerateRoot("beta = 0".into()));
    }
    if (&(alpha * alpha) - &(&sc(4) * beta)).is_zero() {
        return Err(BelyiError::DegenerateRoot("H2 is a square".into()));
    }
    let g = truncated_g(&g_series(p, r, alpha, beta, m + 1), m)?;
    let h2 = Poly::new(vec![Scalar::one(), alpha.clone(), beta.clone()]);
    if g.gcd(&h2).deg() > 0 {
        return Err(BelyiError::DegenerateRoot("G shares a root with H2".into()));
    }
    Ok(BelyiMap { form: MapForm::OneQuadratic { p, r, alpha: alpha.clone(), beta: beta.clone() }, m, g })
}

/// Form-2 map from the invariant z, with α = 1 and β = z/4.
pub fn assemble_form2_z(p: i64, r: i64, m: usize, z: &Scalar) -> Result<BelyiMap, BelyiError> {
    let beta = z.checked_div(&sc(4))?;
    assemble_form2(p, r, m, &Scalar::one(), &beta)
}

/// The α = 0 map, with H₂ = 1 + x².
pub fn assemble_form2_alpha_zero(p: i64, r: i64, m: usize) -> Result<BelyiMap, BelyiError> {
    if m % 2 == 1 {
        return Err(BelyiError::DegenerateRoot("alpha = 0 needs even m".into()));
    }
    assemble_form2(p, r, m, &Scalar::zero(), &Scalar::one())
}

trait ScalarExt {
    fn inv(&self) -> Result<Scalar, ExactError>;
}

impl ScalarExt for Scalar {
    fn inv(&self) -> Result<Scalar, ExactError> {
        Scalar::one().checked_div(self)
    }
}

fn lin(c: &Scalar) -> Poly<Scalar> {
    // 1 − c·x
    Poly::new(vec![Scalar::one(), -c.clone()])
}

impl BelyiMap {
    pub fn p(&self) -> i64 {
        match self.form {
            MapForm::TwoLinear { p, .. } | MapForm::OneQuadratic { p, .. } => p,
        }
    }

    pub fn r(&self) -> i64 {
        match self.form {
            MapForm::TwoLinear { r, .. } | MapForm::OneQuadratic { r, .. } => r,
        }
    }

    pub fn form_name(&self) -> &'static str {
        match self.form {
            MapForm::TwoLinear { .. } => "two-linear",
            MapForm::OneQuadratic { .. } => "one-quadratic",
        }
    }

    /// Factors with their exponents.
    pub fn factors(&self) -> Vec<(Poly<Scalar>, i64)> {
        match &self.form {
            MapForm::TwoLinear { p, q, r, lambda } => {
                vec![(lin(&Scalar::one()), *p), (lin(lambda), *q), (self.g.clone(), *r)]
            }
            MapForm::OneQuadratic { p, r, alpha, beta } => {
                vec![(Poly::new(vec![Scalar::one(), alpha.clone(), beta.clone()]), *p), (self.g.clone(), *r)]
            }
        }
    }

    /// Radicand of the field of definition, None for ℚ.
    pub fn field(&self) -> Option<i64> {
        self.factors().iter().flat_map(|(f, _)| f.coeffs().iter().filter_map(Scalar::field).collect::<Vec<_>>()).next()
    }

    /// Branching order of x = ∞ with sign: positive when ∞ lies above φ = ∞.
    pub fn infinity_exponent(&self) -> i64 {
        let m = self.m as i64;
        match self.form {
            MapForm::TwoLinear { p, q, r, .. } => p + q + m * r,
            MapForm::OneQuadratic { p, r, .. } => 2 * p + m * r,
        }
    }

    /// Degree from the branching data alone.
    pub fn degree_formula(&self) -> usize {
        let m = self.m as i64;
        let v: Vec<i64> = match self.form {
            MapForm::TwoLinear { p, q, r, .. } => vec![p, q, p + q, m * r, p + m * r, q + m * r, p + q + m * r],
            MapForm::OneQuadratic { p, r, .. } => vec![2 * p, m * r, 2 * p + m * r],
        };
        v.into_iter().map(|x| x.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Numerator and denominator of φ, before cancellation.
    pub fn numerator_denominator(&self) -> (Poly<Scalar>, Poly<Scalar>) {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (f, e) in self.factors() {
            let k = e.unsigned_abs() as u32;
            if e > 0 {
                num = &num * &f.pow(k);
            } else {
                den = &den * &f.pow(k);
            }
        }
        (num, den)
    }

    /// Coefficients of the series defining G, from index 0 up to T−1.
    pub fn defining_series(&self, t: usize) -> Series<Scalar> {
        match &self.form {
            MapForm::TwoLinear { p, q, r, lambda } => h_series(*p, *q, *r, lambda, t),
            MapForm::OneQuadratic { p, r, alpha, beta } => g_series(*p, *r, alpha, beta, t),
        }
    }

    /// Smallest positive integer c such that every factor of φ(c·x) has
    /// integer coefficients; None over a quadratic field.
    pub fn canonical_scale(&self) -> Option<BigInt> {
        canonical_scale_of(&self.factors())
    }

    /// Factors of φ(c·x).
    pub fn rescaled_factors(&self, c: &Rational) -> Vec<(Poly<Scalar>, i64)> {
        let s = Scalar::Rat(c.clone());
        self.factors().into_iter().map(|(f, e)| (f.rescale_x(&s), e)).collect()
    }

    /// Factored display of φ(c·x), numerator over denominator.
    pub fn display_scaled(&self, c: &Rational) -> String {
        format_factored(&self.rescaled_factors(c))
    }

    /// Display with the canonical scale when the map is rational.
    pub fn display(&self) -> String {
        let c = self.canonical_scale().map(Rational::from_integer).unwrap_or_else(Rational::one);
        self.display_scaled(&c)
    }
}

/// Trial division by primes below 2¹⁶; returns the prime powers found and
/// the unfactored cofactor.
fn factor_small(n: &BigInt) -> (Vec<(BigInt, u32)>, BigInt) {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut pr: u64 = 2;
    while pr < 65536 && !n.is_one() {
        let bp = BigInt::from(pr);
        if &bp * &bp > n {
            out.push((n.clone(), 1));
            n = BigInt::one();
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        pr += if pr == 2 { 1 } else { 2 };
    }
    (out, n)
}

/// Smallest positive integer c such that every polynomial f(c·x) in the
/// list has integer coefficients; None over a quadratic field.
pub fn canonical_scale_of(factors: &[(Poly<Scalar>, i64)]) -> Option<BigInt> {
    let mut need: Vec<(BigInt, u32)> = Vec::new();
    let mut extra = BigInt::one();
    for (f, _) in factors {
        for (k, c) in f.coeffs().iter().enumerate().skip(1) {
            let c = c.as_rational()?;
            let (primes, rest) = factor_small(c.denom());
            for (pr, e) in primes {
                let want = (e as usize).div_ceil(k) as u32;
                match need.iter_mut().find(|(q, _)| *q == pr) {
                    Some(slot) => slot.1 = slot.1.max(want),
                    None => need.push((pr, want)),
                }
            }
            if !rest.is_one() {
                extra = extra.lcm(&rest);
            }
        }
    }
    let mut c = extra;
    for (pr, e) in need {
        c *= pr.pow(e);
    }
    Some(c)
}

/// `(f1)^e1*(f2)^e2/(f3)^e3`, factors with negative exponent in the denominator.
pub fn format_factored(factors: &[(Poly<Scalar>, i64)]) -> String {
    let part = |sel: &dyn Fn(i64) -> bool| -> Vec<String> {
        factors
            .iter()
            .filter(|(_, e)| sel(*e))
            .map(|(f, e)| {
                let k = e.unsigned_abs();
                let body = format!("({})", format_poly(f, "x"));
                if k == 1 {
                    body
                } else {
                    format!("{}^{}", body, k)
                }
            })
            .collect()
    };
    let num = part(&|e| e > 0);
    let den = part(&|e| e < 0);
    let num = if num.is_empty() { "1".to_string() } else { num.join("*") };
    match den.len() {
        0 => num,
        1 => format!("{}/{}", num, den[0]),
        _ => format!("{}/({})", num, den.join("*")),
    }
}

/// Where a set of fiber points lies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberLocus {
    Point(Scalar),
    Infinity,
    /// All roots of a monic squarefree polynomial, coefficients by degree.
    RootsOf(Vec<Scalar>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberEntry {
    pub locus: FiberLocus,
    pub order: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Fibers {
    pub zero: Vec<FiberEntry>,
    pub one: Vec<FiberEntry>,
    pub infinity: Vec<FiberEntry>,
}

impl Fibers {
    fn all(&self) -> impl Iterator<Item = &FiberEntry> {
        self.zero.iter().chain(self.one.iter()).chain(self.infinity.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BelyiCertificate {
    /// Degree predicted by the branching data.
    pub degree: usize,
    /// Order of φ − 1 at x = 0; None when φ is constant.
    pub vanishing_order: Option<usize>,
    pub fibers: Fibers,
    pub total_points: usize,
    pub valid: bool,
    /// Why the map fails, empty when valid.
    pub reasons: Vec<String>,
    /// Indices k in m+2..=d where the coefficient of the defining series
    /// also vanishes; such indices give further maps at larger m.
    pub extra_zero_indices: Vec<usize>,
}

fn entries(f: &Poly<Scalar>) -> Vec<FiberEntry> {
    if f.deg() == 0 {
        return vec![];
    }
    f.squarefree_decomposition()
        .into_iter()
        .map(|(part, order)| {
            let count = part.deg();
            let locus = if count == 1 {
                FiberLocus::Point(-part.coeff(0))
            } else {
                FiberLocus::RootsOf(part.coeffs().to_vec())
            };
            FiberEntry { locus, order, count }
        })
        .collect()
}

/// Checks φ = 1 + O(x^{m+2}) exactly and counts the distinct points in the
/// three fibers, which must be d + 2 for a genus-0 Belyi map of degree d.
pub fn certify(map: &BelyiMap) -> BelyiCertificate {
    let degree = map.degree_formula();
    let mut reasons = Vec::new();
    let (mut num, mut den) = map.numerator_denominator();
    let common = num.gcd(&den);
    if common.deg() > 0 {
        reasons.push(format!("numerator and denominator share a factor of degree {}", common.deg()));
        num = num.exact_div(&common).expect("gcd divides");
        den = den.exact_div(&common).expect("gcd divides");
    }
    let (dn, dd) = (num.deg(), den.deg());
    let actual = dn.max(dd);
    if actual != degree {
        reasons.push(format!("degree {} differs from the branching degree {}", actual, degree));
    }
    let diff = &num - &den;
    let vanishing_order = diff.ord0();
    let mut fibers = Fibers { zero: entries(&num), one: vec![], infinity: entries(&den) };
    match dn.cmp(&dd) {
        Ordering::Less => fibers.zero.push(FiberEntry { locus: FiberLocus::Infinity, order: dd - dn, count: 1 }),
        Ordering::Greater => fibers.infinity.push(FiberEntry { locus: FiberLocus::Infinity, order: dn - dd, count: 1 }),
        Ordering::Equal => {}
    }
    match vanishing_order {
        None => reasons.push("phi is constant".into()),
        Some(k) => {
            fibers.one.push(FiberEntry { locus: FiberLocus::Point(Scalar::zero()), order: k, count: 1 });
            let rest = Poly::new(diff.coeffs()[k..].to_vec());
            fibers.one.extend(entries(&rest));
            if dn == dd && diff.deg() < actual {
                fibers.one.push(FiberEntry { locus: FiberLocus::Infinity, order: actual - diff.deg(), count: 1 });
            }
            if k != map.m + 2 {
                reasons.push(format!("phi - 1 vanishes to order {} instead of {}", k, map.m + 2));
            }
        }
    }
    let total_points = fibers.all().map(|e| e.count).sum();
    if total_points != degree + 2 {
        reasons.push(format!("{} points in the three fibers instead of {}", total_points, degree + 2));
    }
    let series = map.defining_series(degree.max(map.m + 1) + 1);
    let extra_zero_indices =
        series.coeffs().iter().enumerate().skip(map.m + 2).filter(|(_, c)| c.is_zero()).map(|(i, _)| i).collect();
    BelyiCertificate {
        degree,
        vanishing_order,
        fibers,
        total_points,
        valid: reasons.is_empty(),
        reasons,
        extra_zero_indices,
    }
}

/// A map of the m = 1 family with its σ, σ² = −pqr(p+q+r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaMap {
    pub sigma: Scalar,
    pub map: BelyiMap,
}

/// (p, q, r, σ) = (u(uv+1), v(uv+1), −u−v, −uv(u+v)(uv+1)).
pub fn sigma_uv(u: &Rational, v: &Rational) -> (Rational, Rational, Rational, Rational) {
    let w = u * v + Rational::one();
    let s = u + v;
    (u * &w, v * &w, -s.clone(), -(u * v) * s * w)
}

/// The maps (1−x)^p (1 + ax)^q (1 + bx)^r = 1 + O(x³) with
/// a = (pq+σ)/(q(q+r)), b = (pr−σ)/(r(q+r)). Candidates where two branch
/// points coalesce (so φ collapses) are dropped.
pub fn m1_sigma_family(p: i64, q: i64, r: i64) -> Result<Vec<SigmaMap>, BelyiError> {
    check_form11(p, q, r, 1)?;
    let (pr, qr, rr) = (ri(p), ri(q), ri(r));
    // r(r+q)b² − 2pr·b + p(p+q) = 0, a = (p − rb)/q.
    let mut cands: Vec<(Scalar, Scalar)> = Vec::new();
    if q + r == 0 {
        let b = Scalar::Rat(frac(p + q, 2 * r));
        cands.push((Scalar::Rat(&pr * &rr), b));
    } else {
        let disc = -(&pr * &qr * &rr * (&pr + &qr + &rr));
        let sigma = Scalar::sqrt_rational(&disc)?;
        let den = Scalar::Rat(&rr * (&qr + &rr));
        for s in [sigma.clone(), -sigma] {
            let b = (&Scalar::Rat(&pr * &rr) - &s).checked_div(&den)?;
            cands.push((s, b));
        }
    }
    let mut out = Vec::new();
    for (sigma, b) in cands {
        let a = (&Scalar::Rat(pr.clone()) - &(&Scalar::Rat(rr.clone()) * &b)).checked_div(&Scalar::Rat(qr.clone()))?;
        let minus_one = sc(-1);
        if a.is_zero() || b.is_zero() || a == minus_one || b == minus_one || a == b {
            continue;
        }
        let map =
            BelyiMap { form: MapForm::TwoLinear { p, q, r, lambda: -a }, m: 1, g: Poly::new(vec![Scalar::one(), b]) };
        out.push(SigmaMap { sigma, map });
    }
    if out.is_empty() {
        return Err(BelyiError::AllDegenerate);
    }
    Ok(out)
}

/// Möbius images of λ that keep x = 0 fixed and permute the points 1, 1/λ, ∞
/// while preserving the exponent pattern (p, q).
pub fn orbit_lambdas(p: i64, q: i64, r: i64, m: usize, lambda: &Scalar) -> Vec<Scalar> {
    let s = -p - q - m as i64 * r;
    let one = Scalar::one();
    let l = lambda.clone();
    let lm1 = &l - &one;
    let div = |a: &Scalar, b: &Scalar| a.checked_div(b).ok();
    // (order of the point sent to 1, order of the point sent to 1/λ′, λ′)
    let perms = [
        (p, q, Some(l.clone())),
        (q, p, div(&one, &l)),
        (p, s, div(&l, &lm1)),
        (q, s, div(&one, &(-lm1.clone()))),
        (s, p, div(&lm1, &l)),
        (s, q, Some(&one - &l)),
    ];
    let mut out: Vec<Scalar> =
        perms.into_iter().filter(|(a, b, _)| *a == p && *b == q).filter_map(|(_, _, x)| x).collect();
    out.sort();
    out.dedup();
    out
}

/// Keeps one map per Möbius orbit (two-linear form) or per x-scaling class.
pub fn dedup_orbit(maps: Vec<BelyiMap>) -> Vec<BelyiMap> {
    let mut seen: Vec<(i64, i64, i64, usize, Scalar)> = Vec::new();
    let mut out = Vec::new();
    for map in maps {
        let key = match &map.form {
            MapForm::TwoLinear { p, q, r, lambda } => {
                let k = orbit_lambdas(*p, *q, *r, map.m, lambda).into_iter().next().unwrap_or_else(|| lambda.clone());
                (*p, *q, *r, map.m, k)
            }
            MapForm::OneQuadratic { p, r, alpha, beta } => {
                let z = if alpha.is_zero() {
                    Scalar::Rat(ri(-1))
                } else {
                    (&sc(4) * beta).checked_div(&(alpha * alpha)).unwrap_or_else(|_| Scalar::zero())
                };
                (*p, *p, *r, map.m, z)
            }
        };
        if !seen.contains(&key) {
            seen.push(key);
            out.push(map);
        }
    }
    out
}

/// Every map for the given data, in canonical order: sorted by λ or z,
/// the α = 0 map first.
pub fn enumerate_form11(p: i64, q: i64, r: i64, m: usize) -> Result<(Form11Solution, Vec<BelyiMap>), BelyiError> {
    let sol = solve_form11(p, q, r, m)?;
    let mut maps = Vec::new();
    for l in &sol.roots.roots {
        if let Ok(map) = assemble_form11(p, q, r, m, l) {
            maps.push(map);
        }
    }
    Ok((sol, maps))
}

pub fn enumerate_form2(p: i64, r: i64, m: usize) -> Result<(Form2Solution, Vec<BelyiMap>), BelyiError> {
    let sol = solve_form2(p, r, m)?;
    let mut maps = Vec::new();
    if sol.alpha_zero_map {
        if let Ok(map) = assemble_form2_alpha_zero(p, r, m) {
            maps.push(map);
        }
    }
    for z in &sol.z_roots.roots {
        if let Ok(map) = assemble_form2_z(p, r, m, z) {
            maps.push(map);
        }
    }
    Ok((sol, maps))
}

/// JSON form of a map, schema 1. Exact scalars are strings or
/// {"a","b","d"} objects.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub schema: u32,
    pub form: String,
    pub p: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i64>,
    pub r: i64,
    pub m: usize,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Scalar>,
    #[serde(rename = "G")]
    pub g: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
    /// c in the display of φ(c·x), when rescaled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BelyiCertificate>,
}

impl MapRecord {
    pub fn new(map: &BelyiMap, certificate: Option<BelyiCertificate>) -> Self {
        let (q, lambda, alpha, beta) = match &map.form {
            MapForm::TwoLinear { q, lambda, .. } => (Some(*q), Some(lambda.clone()), None, None),
            MapForm::OneQuadratic { alpha, beta, .. } => (None, None, Some(alpha.clone()), Some(beta.clone())),
        };
        MapRecord {
            schema: 1,
            form: map.form_name().to_string(),
            p: map.p(),
            q,
            r: map.r(),
            m: map.m,
            field: field_label(map.field()),
            lambda,
            alpha,
            beta,
            g: map.g.coeffs().to_vec(),
            display: Some(map.display_scaled(&Rational::one())),
            scale: None,
            certificate,
        }
    }

    /// Same record displayed as φ(c·x) with the canonical scale c; maps over
    /// a quadratic field keep c = 1.
    pub fn rescaled(mut self, map: &BelyiMap) -> Self {
        let c = map.canonical_scale().unwrap_or_else(BigInt::one);
        self.display = Some(map.display_scaled(&Rational::from_integer(c.clone())));
        self.scale = Some(c.to_string());
        self
    }

    /// The stored map, G taken verbatim so that certification judges it.
    pub fn to_map(&self) -> Result<BelyiMap, BelyiError> {
        if self.schema != 1 {
            return Err(BelyiError::Record(format!("unsupported schema {}", self.schema)));
        }
        let missing = |s: &str| BelyiError::Record(format!("missing field {}", s));
        let form = match self.form.as_str() {
            "two-linear" => MapForm::TwoLinear {
                p: self.p,
                q: self.q.ok_or_else(|| missing("q"))?,
                r: self.r,
                lambda: self.lambda.clone().ok_or_else(|| missing("lambda"))?,
            },
            "one-quadratic" => MapForm::OneQuadratic {
                p: self.p,
                r: self.r,
                alpha: self.alpha.clone().ok_or_else(|| missing("alpha"))?,
                beta: self.beta.clone().ok_or_else(|| missing("beta"))?,
            },
            other => return Err(BelyiError::Record(format!("unknown form {:?}", other))),
        };
        let g = Poly::new(self.g.clone());
        if g.coeffs().first() != Some(&Scalar::one()) {
            return Err(BelyiError::Record("G(0) must be 1".into()));
        }
        Ok(BelyiMap { form, m: self.m, g })
    }
}
