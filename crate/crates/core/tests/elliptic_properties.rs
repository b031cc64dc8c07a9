use belyi_core::elliptic::*;
use belyi_core::exact::{rat, Rational, Scalar};
use num_traits::Zero;
use proptest::prelude::*;

fn e5_points() -> Vec<PointQ> {
    let s = specialize(5).unwrap();
    mw_enumerate(&s.mw_spec(4), true).unwrap()
}

#[test]
fn group_law_on_e5() {
    let s = specialize(5).unwrap();
    let pts = e5_points();
    let n = pts.len();
    let mut triples = 0;
    for i in 0..n {
        for j in (i..n).step_by(3) {
            let k = (i * 7 + j * 3) % n;
            let (p, q, r) = (&pts[i], &pts[j], &pts[k]);
            let c = &s.curve;
            assert_eq!(c.add(p, q).unwrap(), c.add(q, p).unwrap());
            let lhs = c.add(&c.add(p, q).unwrap(), r).unwrap();
            let rhs = c.add(p, &c.add(q, r).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            triples += 1;
        }
    }
    assert!(triples >= 100);
}

#[test]
fn scalar_mul_by_doubling() {
    let s = specialize(5).unwrap();
    let c = &s.curve;
    let p = PointQ::ints(-5, 80);
    let mut acc = PointQ::Infinity;
    for n in 0..12 {
        assert_eq!(c.scalar_mul(&p, n).unwrap(), acc);
        acc = c.add(&acc, &p).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn e3_j_invariant(n in -40i64..40, d in 1i64..9) {
        let b = rat(n, d);
        prop_assume!(![0, -1, -2].iter().any(|k| b == rat(*k, 1)));
        let e = E3Bundle::new(b.clone()).unwrap();
        let b1 = &b + rat(1, 1);
        let q = rat(9, 1) * &b * &b + rat(32, 1) * &b + rat(32, 1);
        let expected = rat(-27, 1) * &b * &b * &q * &q * &q
            / (rat(64, 1) * &b1 * &b1 * &b1 * (&b + rat(2, 1)) * (&b + rat(2, 1)));
        prop_assert_eq!(e.curve.j_invariant(), expected);
    }
}

#[test]
fn specialize_soundness_on_e5_e6() {
    for m in [5, 6] {
        let s = specialize(m).unwrap();
        let mut checked = 0;
        for p in mw_enumerate(&s.mw_spec(6), false).unwrap() {
            let Ok(images) = s.image(&p) else { continue };
            for img in images.iter().filter(|i| s.is_nondegenerate(i)) {
                assert!(s.residual(img).is_zero());
                assert_eq!(s.hpg_value(img), Some(Rational::zero()), "m={m} at {p:?}");
                checked += 1;
            }
        }
        assert!(checked > 20, "m={m}: {checked}");
    }
}

#[test]
fn square_filter_detects_rational_z() {
    for m in [7, 8] {
        let s = specialize(m).unwrap();
        let mut seen = 0;
        for p in mw_enumerate(&s.mw_spec(6), false).unwrap() {
            // the filter vanishes identically at the 2-torsion point (0, 0)
            if p.u().is_none_or(|u| u.is_zero()) {
                continue;
            }
            let Ok(images) = s.image(&p) else { continue };
            let rational = images.iter().all(|i| matches!(i.z, Scalar::Rat(_)));
            assert_eq!(s.square_filter(&p).unwrap().is_some(), rational, "m={m} at {p:?}");
            for img in &images {
                assert!(s.residual(img).is_zero());
            }
            seen += 1;
            if seen == 200 {
                break;
            }
        }
        assert!(seen >= 100, "m={m}: {seen}");
    }
}
