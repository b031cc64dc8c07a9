use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::Rational;

/// Sparse multivariate polynomial over ℚ in a fixed number of variables.
/// Used for symbolic identity checks on the surfaces and fibrations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, Rational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::int(self.nvars, 1);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.nvars);
        let mut s = Rational::zero();
        for (e, a) in &self.terms {
            let mut t = a.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Replaces variable `i` by `q`.
    pub fn substitute(&self, i: usize, q: &MPoly) -> Self {
        let maxk = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        let mut pows = vec![Self::int(self.nvars, 1)];
        for k in 1..=maxk as usize {
            pows.push(&pows[k - 1] * q);
        }
        let mut acc = Self::zero(self.nvars);
        for (e, a) in &self.terms {
            let mut e2 = e.clone();
            e2[i] = 0;
            let mut mono = Self::zero(self.nvars);
            mono.terms.insert(e2, a.clone());
            acc = &acc + &(&mono * &pows[e[i] as usize]);
        }
        acc
    }

    fn insert_add(&mut self, e: Vec<u32>, a: Rational) {
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !a.is_zero() {
                    v.insert(a);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += a;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, a) in &o.terms {
            r.insert_add(e.clone(), a.clone());
        }
        r
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, a) in &o.terms {
            r.insert_add(e.clone(), -a.clone());
        }
        r
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, a1) in &self.terms {
            for (e2, a2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                r.insert_add(e, a1 * a2);
            }
        }
        r
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, o: MPoly) -> MPoly { (&self).$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::int;

    #[test]
    fn expand_square() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let s = (&x + &y).pow(2);
        let t = &(&x * &x) + &(&(&x * &y).scale(&int(2)) + &(&y * &y));
        assert_eq!(s, t);
        assert_eq!(s.eval(&[int(2), int(3)]), int(25));
        assert!((&s - &t).is_zero());
    }

    #[test]
    fn substitution() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p = &x * &x;
        let q = p.substitute(0, &(&y + &MPoly::int(2, 1)));
        assert_eq!(q.eval(&[int(0), int(4)]), int(25));
        assert_eq!(q.total_degree(), 2);
    }
}
