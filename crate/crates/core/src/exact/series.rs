use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;

use super::poly::Poly;
use super::scalar::{Field, Rational};

/// Power series truncated at order T: exactly T stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series<F> {
    coeffs: Vec<F>,
}

fn ri<F: Field>(n: i64) -> F {
    F::from_rational(Rational::from_integer(BigInt::from(n)))
}

impl<F: Field> Series<F> {
    /// Pads or cuts `coeffs` to length `t`.
    pub fn new(mut coeffs: Vec<F>, t: usize) -> Self {
        assert!(t >= 1, "series order must be positive");
        coeffs.resize(t, F::zero());
        Series { coeffs }
    }

    pub fn from_poly(p: &Poly<F>, t: usize) -> Self {
        Self::new(p.coeffs().to_vec(), t)
    }

    pub fn one(t: usize) -> Self {
        Self::new(vec![F::one()], t)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::new(self.coeffs.clone())
    }

    pub fn truncate(&self, t: usize) -> Self {
        Self::new(self.coeffs.iter().take(t).cloned().collect(), t.min(self.order()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Indices of zero coefficients.
    pub fn zero_indices(&self) -> Vec<usize> {
        self.coeffs.iter().enumerate().filter(|(_, c)| c.is_zero()).map(|(i, _)| i).collect()
    }

    /// Lowest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs[0].clone();
        if c0.is_zero() {
            return None;
        }
        let inv0 = F::one() / c0;
        let t = self.order();
        let mut g = vec![F::zero(); t];
        g[0] = inv0.clone();
        for n in 1..t {
            let mut s = F::zero();
            for k in 1..=n {
                s = s + self.coeffs[k].clone() * g[n - k].clone();
            }
            g[n] = -(s * inv0.clone());
        }
        Some(Series { coeffs: g })
    }

    /// f^e for a series with constant term 1, any rational e.
    pub fn pow_rational(&self, e: &Rational) -> Option<Self> {
        if !self.coeffs[0].is_one() {
            return None;
        }
        let t = self.order();
        let e = F::from_rational(e.clone());
        let mut g = vec![F::zero(); t];
        g[0] = F::one();
        for n in 1..t {
            let mut s = F::zero();
            for k in 1..=n {
                let f = &self.coeffs[k];
                if f.is_zero() {
                    continue;
                }
                let w = e.clone() * ri(k as i64) - ri((n - k) as i64);
                s = s + w * f.clone() * g[n - k].clone();
            }
            g[n] = s / ri(n as i64);
        }
        Some(Series { coeffs: g })
    }
}

impl<'a, F: Field> Add<&'a Series<F>> for &'a Series<F> {
    type Output = Series<F>;
    fn add(self, o: &Series<F>) -> Series<F> {
        let t = self.order().min(o.order());
        Series { coeffs: (0..t).map(|i| self.coeffs[i].clone() + o.coeffs[i].clone()).collect() }
    }
}

impl<'a, F: Field> Sub<&'a Series<F>> for &'a Series<F> {
    type Output = Series<F>;
    fn sub(self, o: &Series<F>) -> Series<F> {
        let t = self.order().min(o.order());
        Series { coeffs: (0..t).map(|i| self.coeffs[i].clone() - o.coeffs[i].clone()).collect() }
    }
}

impl<'a, F: Field> Mul<&'a Series<F>> for &'a Series<F> {
    type Output = Series<F>;
    fn mul(self, o: &Series<F>) -> Series<F> {
        let t = self.order().min(o.order());
        let mut v = vec![F::zero(); t];
        for (i, a) in self.coeffs.iter().take(t).enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..t - i {
                v[i + j] = v[i + j].clone() + a.clone() * o.coeffs[j].clone();
            }
        }
        Series { coeffs: v }
    }
}

/// Rising factorial (a)_k.
pub fn pochhammer<F: Field>(a: &F, k: usize) -> F {
    let mut acc = F::one();
    for i in 0..k {
        acc = acc * (a.clone() + ri(i as i64));
    }
    acc
}

pub fn factorial<F: Field>(k: usize) -> F {
    (1..=k).fold(F::one(), |acc, i| acc * ri(i as i64))
}

/// (1 + αx + βx²)^e mod x^T by the finite double sum
/// Σ_j (−1)^{k−j} (−e)_{k−j} α^{k−2j} β^j / ((k−2j)! j!).
pub fn series_binomial_pow<F: Field>(alpha: &F, beta: &F, e: &Rational, t: usize) -> Series<F> {
    let a = F::from_rational(-e.clone());
    let mut apow = vec![F::one()];
    let mut bpow = vec![F::one()];
    for i in 1..t {
        apow.push(apow[i - 1].clone() * alpha.clone());
        bpow.push(bpow[i - 1].clone() * beta.clone());
    }
    let fact: Vec<F> = (0..t).map(factorial::<F>).collect();
    let poch: Vec<F> = (0..t).map(|k| pochhammer(&a, k)).collect();
    let mut out = Vec::with_capacity(t);
    for k in 0..t {
        let mut s = F::zero();
        for j in 0..=k / 2 {
            let i = k - 2 * j;
            if (i > 0 && alpha.is_zero()) || (j > 0 && beta.is_zero()) {
                continue;
            }
            let mut term =
                poch[k - j].clone() * apow[i].clone() * bpow[j].clone() / (fact[i].clone() * fact[j].clone());
            if (k - j) % 2 == 1 {
                term = -term;
            }
            s = s + term;
        }
        out.push(s);
    }
    Series { coeffs: out }
}
