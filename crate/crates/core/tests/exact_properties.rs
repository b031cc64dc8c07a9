use belyi_core::exact::{rat, series_binomial_pow, split_roots, Poly, QuadExt, Rational, Scalar, Series};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn radicand() -> impl Strategy<Value = i64> {
    prop::sample::select(vec![-7i64, -5, -3, -2, -1, 2, 3, 5, 6, 10])
}

fn quad() -> impl Strategy<Value = QuadExt> {
    (small_rat(), small_rat(), radicand()).prop_map(|(a, b, d)| QuadExt::new(a, b, d).unwrap())
}

fn quad_pair() -> impl Strategy<Value = (QuadExt, QuadExt)> {
    (small_rat(), small_rat(), small_rat(), small_rat(), radicand())
        .prop_map(|(a, b, c, e, d)| (QuadExt::new(a, b, d).unwrap(), QuadExt::new(c, e, d).unwrap()))
}

proptest! {
    #[test]
    fn rational_inverse(x in small_rat()) {
        prop_assume!(!x.is_zero());
        prop_assert!((&x * x.recip()).is_one());
    }

    #[test]
    fn quad_inverse_and_norm((x, y) in quad_pair()) {
        prop_assume!(!x.norm().is_zero());
        prop_assert_eq!(x.checked_mul(&x.inv().unwrap()).unwrap(), QuadExt::new(Rational::one(), Rational::zero(), x.d).unwrap());
        prop_assert_eq!(x.checked_mul(&y).unwrap().norm(), x.norm() * y.norm());
        prop_assert_eq!(x.checked_mul(&x.conj()).unwrap().b, Rational::zero());
    }

    #[test]
    fn binomial_exponents_add(a in small_rat(), b in small_rat(), e1 in small_rat(), e2 in small_rat(), t in 1usize..9) {
        let s1: Series<Rational> = series_binomial_pow(&a, &b, &e1, t);
        let s2 = series_binomial_pow(&a, &b, &e2, t);
        prop_assert_eq!(&s1 * &s2, series_binomial_pow(&a, &b, &(&e1 + &e2), t));
    }

    #[test]
    fn binomial_integer_power(a in small_rat(), b in small_rat(), e in 0u32..7, t in 1usize..12) {
        let base = Poly::new(vec![Rational::one(), a.clone(), b.clone()]);
        let direct = base.pow(e).truncate(t);
        let s = series_binomial_pow(&a, &b, &Rational::from_integer(e.into()), t);
        prop_assert_eq!(s.to_poly(), direct);
    }

    #[test]
    fn split_roots_reconstructs(roots in prop::collection::vec(small_rat(), 0..4),
                                quads in prop::collection::vec((small_rat(), small_rat()), 0..2),
                                lead in small_rat()) {
        prop_assume!(!lead.is_zero());
        let mut p = Poly::constant(lead);
        for r in &roots {
            p = &p * &Poly::linear(-r.clone(), Rational::one());
        }
        for (s, t) in &quads {
            p = &p * &Poly::new(vec![t.clone(), s.clone(), Rational::one()]);
        }
        let split = split_roots(&p);
        prop_assert_eq!(split.product(), p);
        let distinct: std::collections::BTreeSet<_> = roots.iter().cloned().collect();
        prop_assert!(split.rational_roots.len() >= distinct.len());
    }

    #[test]
    fn scalar_field_ops(x in quad(), y in small_rat()) {
        let sx = Scalar::from(x.clone());
        let sy = Scalar::Rat(y.clone());
        let sum = sx.clone() + sy.clone();
        prop_assert_eq!(sum - sy.clone(), sx.clone());
        if !y.is_zero() {
            prop_assert_eq!((sx.clone() * sy.clone()) / sy, sx);
        }
    }
}
