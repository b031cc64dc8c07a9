use belyi_core::belyi::*;
use belyi_core::exact::{int, pochhammer, rat, Poly, Rational, Scalar};
use belyi_core::hypergeom::krawtchouk_bridge;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn grid11() -> impl Iterator<Item = (i64, i64, i64, usize)> {
    (0..=4usize).flat_map(|m| {
        (-4i64..=4)
            .filter(|r| *r != 0)
            .flat_map(move |r| (-6i64..=6).flat_map(move |p| (-6i64..=6).map(move |q| (p, q, r, m))))
    })
}

#[test]
fn form11_grid_count_law_and_certificates() {
    let mut solved = 0;
    for (p, q, r, m) in grid11() {
        let Ok(sol) = solve_form11(p, q, r, m) else { continue };
        solved += 1;
        assert_eq!(
            sol.roots.distinct_count(),
            sol.report.expected_count,
            "count law at ({p},{q},{r},{m}): {:?}",
            sol.report
        );
        let h = sol.polynomial.map(|c| Scalar::Rat(c.clone()));
        for lambda in &sol.roots.roots {
            assert!(h.eval(lambda).is_zero());
            let series = h_series(p, q, r, lambda, m + 2);
            assert!(series.coeff(m + 1).is_zero(), "h_(m+1) at ({p},{q},{r},{m}) λ={lambda}");
            let map = assemble_form11(p, q, r, m, lambda)
                .unwrap_or_else(|e| panic!("assemble ({p},{q},{r},{m}) λ={lambda}: {e}"));
            let cert = certify(&map);
            if sol.report.class == Degeneracy::Generic {
                assert!(cert.valid, "({p},{q},{r},{m}) λ={lambda}: {:?}", cert.reasons);
            }
        }
    }
    assert!(solved > 5000);
}

#[test]
fn form2_grid_count_law_and_certificates() {
    for m in 0..=7usize {
        for r in (-4i64..=4).filter(|r| *r != 0) {
            for p in -8i64..=8 {
                let Ok((sol, maps)) = enumerate_form2(p, r, m) else { continue };
                assert_eq!(sol.map_count(), sol.report.expected_count, "({p},{r},{m}): {:?}", sol.report);
                assert_eq!(maps.len(), sol.z_roots.roots.len() + usize::from(sol.alpha_zero_map));
                for map in &maps {
                    let cert = certify(map);
                    if sol.report.class == Degeneracy::Generic {
                        assert!(cert.valid, "({p},{r},{m}): {:?}", cert.reasons);
                    }
                }
            }
        }
    }
}

fn cubic_discriminant(c: &[Rational]) -> Rational {
    let (d, cc, b, a) = (&c[0], &c[1], &c[2], &c[3]);
    b * b * cc * cc - int(4) * a * cc * cc * cc - int(4) * b * b * b * d - int(27) * a * a * d * d
        + int(18) * a * b * cc * d
}

proptest! {
    #[test]
    fn m2_cubic_discriminant(p in -30i64..30, q in -30i64..30, r in -12i64..12) {
        prop_assume!(p != 0 && q != 0 && r != 0);
        let h = h_poly(p, q, r, 3);
        prop_assume!(h.degree() == Some(3));
        let scale = Rational::from_integer((6 * r * r * r).into());
        let cleared = h.scale(&scale);
        let (p, q, r) = (int(p), int(q), int(r));
        let s = &p + &q + int(2) * &r;
        let expected = int(-108) * &p * &p * &q * &q * &r * &r * &r
            * (&p + &r) * (&q + &r) * (&p + &q + &r) * &s * &s;
        prop_assert_eq!(cubic_discriminant(cleared.coeffs()), expected);
    }
}

// h_k = (p/r)_k/k! · ₂F₁(−k, q/r; 1−k−p/r; λ); with q/r = −n the
// hypergeometric factor is a Krawtchouk polynomial at 1/(1−λ).
#[test]
fn krawtchouk_bridge_on_integer_parameters() {
    let mut checked = 0;
    for (p, q, r, m) in grid11() {
        if p % r != 0 || q % r != 0 || q / r >= 0 {
            continue;
        }
        let Ok(sol) = solve_form11(p, q, r, m) else { continue };
        let k = m + 1;
        let pr = int(p / r);
        if pochhammer(&pr, k).is_zero() {
            continue;
        }
        for lambda in sol.roots.roots.iter().filter_map(|l| l.as_rational()) {
            let big_m = 1 - k as i64 - p / r;
            let pk = Rational::one() / (Rational::one() - lambda);
            let Ok((lhs, rhs)) = krawtchouk_bridge(k, (-q / r) as usize, big_m, &pk) else { continue };
            assert!(lhs.is_zero(), "({p},{q},{r},{m}) λ={lambda}");
            assert_eq!(lhs, rhs);
            checked += 1;
        }
    }
    assert!(checked > 10, "only {checked} evaluations bridged");
}

// k-th coefficient of (1−x)^(−2)(1−(k+1)x/(b+k+1))^(−b), times (b+k+1)^k,
// as a polynomial in b.
fn cleared_coefficient(k: usize) -> Poly<Rational> {
    let b = Poly::<Rational>::x();
    let shifted = Poly::linear(int(k as i64 + 1), int(1));
    let mut total = Poly::zero();
    let mut rising = Poly::one();
    for j in 0..=k {
        if j > 0 {
            rising = &rising * &(&b + &Poly::constant(int(j as i64 - 1)));
        }
        let mut fact = Rational::one();
        for i in 1..=j {
            fact *= int(i as i64);
        }
        let w = int((k - j) as i64 + 1) * num_traits::pow(int(k as i64 + 1), j) / fact;
        let term = &rising.scale(&w) * &shifted.pow((k - j) as u32);
        total = &total + &term;
    }
    total
}

#[test]
fn coefficient_divisible_by_rising_factorial() {
    for k in 1..=6usize {
        let mut rising = Poly::<Rational>::one();
        for i in 1..=k {
            rising = &rising * &Poly::linear(int(i as i64), int(1));
        }
        let c = cleared_coefficient(k);
        assert!(c.exact_div(&rising).is_some(), "k={k}: {c:?}");
    }
    assert_eq!(cleared_coefficient(1), Poly::linear(int(4), int(4)));
    // direct evaluation at b = 3, k = 2
    let b = int(3);
    let direct = int(3) + int(2) * &b * rat(3, 6) + &b * (&b + int(1)) / int(2) * rat(9, 36);
    assert_eq!(cleared_coefficient(2).eval(&b) / int(36), direct);
}
