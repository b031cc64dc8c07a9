use belyi_core::exact::{int, pochhammer, rat, Rational};
use belyi_core::hypergeom::*;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn constant_term_is_one(n in 0usize..9, b in small_rat(), c in small_rat()) {
        let spec = HpgSpec::new(n, b, c);
        if let Ok(p) = hpg_poly(&spec) {
            prop_assert!(p.coeff(0).is_one());
        }
    }

    #[test]
    fn degree_law(n in 0usize..9, b in small_rat(), c in small_rat()) {
        let spec = HpgSpec::new(n, b.clone(), c);
        prop_assume!(spec.is_defined());
        let p = hpg_poly(&spec).unwrap();
        prop_assert_eq!(p.deg() == n, !pochhammer(&b, n).is_zero());
    }

    #[test]
    fn half_degree_law(n in 0usize..11, c in small_rat()) {
        let k = n / 2;
        prop_assume!(!pochhammer(&c, k).is_zero());
        let p = hpg_half_poly(&HalfSpec::new(n, c)).unwrap();
        prop_assert_eq!(p.deg(), k);
    }

    #[test]
    fn integer_lemma(k in 1usize..9, b in small_rat(), c in small_rat()) {
        prop_assume!(!pochhammer(&b, k).is_zero() && !pochhammer(&c, k).is_zero());
        prop_assume!(!pochhammer(&(&b + &c), k).is_zero());
        let seq = lemma_sequence(Family::Integer, k, &b, &c).unwrap();
        let pk = &seq[k];
        prop_assert_eq!(pk, &lemma_poly(Family::Integer, k, &b, &c).unwrap());
        prop_assert_eq!(pk.deg(), k);
        prop_assert!(pk.is_squarefree());
        prop_assert_eq!(pk.gcd(&seq[k - 1]).deg(), 0);
        let at_one = pk.eval(&Rational::one());
        prop_assert!(!at_one.is_zero());
        prop_assert_eq!(at_one, value_at_one(Family::Integer, k, &b, &c).unwrap());
    }

    #[test]
    fn half_lemma(k in 1usize..11, c in small_rat()) {
        prop_assume!(!pochhammer(&c, k).is_zero() && !pochhammer(&(int(2) * &c), k).is_zero());
        let seq = lemma_sequence(Family::Half, k, &Rational::zero(), &c).unwrap();
        let pk = &seq[k];
        prop_assert_eq!(pk, &lemma_poly(Family::Half, k, &Rational::zero(), &c).unwrap());
        prop_assert_eq!(pk.deg(), k / 2);
        prop_assert!(pk.is_squarefree());
        prop_assert_eq!(pk.gcd(&seq[k - 1]).deg(), 0);
        let at_one = pk.eval(&Rational::one());
        prop_assert!(!at_one.is_zero());
        prop_assert_eq!(at_one, value_at_one(Family::Half, k, &Rational::zero(), &c).unwrap());
    }

    #[test]
    fn symmetry_identities(n in 0usize..6, b in small_rat(), c in small_rat()) {
        let spec = HpgSpec::new(n, b, c);
        prop_assume!(spec.is_defined());
        for img in symmetry_images(&spec).into_iter().filter(|i| i.defined) {
            prop_assert!(img.holds(&spec), "{:?}", img.map);
        }
    }

    #[test]
    fn chu_vandermonde(n in 0usize..9, b in small_rat(), c in small_rat()) {
        let spec = HpgSpec::new(n, b.clone(), c.clone());
        prop_assume!(!pochhammer(&c, n).is_zero());
        let v = hpg_eval(&spec, &Rational::one()).unwrap();
        let expected = pochhammer(&(&c - &b), n) / pochhammer(&c, n);
        prop_assert_eq!(v, expected);
    }
}
