use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::curve::{CurveQ, MWSpec, PointQ};
use super::EllipticError;
use crate::exact::{fmt_rational, sqrt_detect, Rational, Scalar};

fn ri(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn affine(p: &PointQ) -> Result<(&Rational, &Rational), EllipticError> {
    p.coords().ok_or(EllipticError::AtInfinity)
}

/// Fibration of S₃ by b: the cubic in (c, z) is isomorphic to
/// v² = u³ + b²(3u − 16b − 16)².
#[derive(Clone, Debug)]
pub struct E3Bundle {
    pub b: Rational,
    pub curve: CurveQ,
}

impl E3Bundle {
    pub fn new(b: Rational) -> Result<Self, EllipticError> {
        if b.is_zero() || b == ri(-1) || b == ri(-2) {
            return Err(EllipticError::SingularFiber(format!("b = {}", fmt_rational(&b))));
        }
        let b2 = &b * &b;
        let b1 = &b + ri(1);
        let curve = CurveQ::new(ri(9) * &b2, ri(-96) * &b2 * &b1, ri(256) * &b2 * &b1 * &b1)?;
        Ok(E3Bundle { b, curve })
    }

    fn k16(&self) -> Rational {
        ri(16) * &self.b * (&self.b + ri(1))
    }

    /// (c, z) on ₂F₁(−3, b; −c−2; z) = 0. The point at infinity goes to
    /// (−(b+2)/2, 1/2) on the line b + 2c + 2 = 0.
    pub fn to_surface(&self, p: &PointQ) -> Result<(Rational, Rational), EllipticError> {
        self.curve.check_point(p)?;
        let (u, v) = match p {
            PointQ::Infinity => return Ok((-(&self.b + ri(2)) / ri(2), Rational::new(BigInt::one(), BigInt::from(2)))),
            PointQ::Affine { u, v } => (u, v),
        };
        if v.is_zero() {
            return Err(EllipticError::VZero);
        }
        let b = &self.b;
        let k = self.k16();
        let two_v = ri(2) * v;
        let c = -(b + ri(2)) * (v + ri(3) * b * u - &k) / &two_v;
        let z = (v + (ri(3) * b + ri(4)) * u - &k) / &two_v;
        Ok((c, z))
    }

    pub fn from_surface(&self, c: &Rational, z: &Rational) -> Result<PointQ, EllipticError> {
        let b = &self.b;
        let d = b * c + (b + ri(2)) * (ri(3) * b * z + ri(2) * c + ri(2));
        if d.is_zero() {
            return Err(EllipticError::DegenerateFiber("bc + (b+2)(3bz+2c+2) = 0".into()));
        }
        let u = self.k16() * (b * z + ri(2) * z + c) / &d;
        let v = ri(2) * self.k16() * (b + ri(2)) / &d;
        Ok(PointQ::new(u, v))
    }

    /// The other two roots in z of the cubic through `to_surface(p)`.
    pub fn companions(&self, p: &PointQ) -> Result<(Scalar, Scalar), EllipticError> {
        self.curve.check_point(p)?;
        let (u, v) = affine(p)?;
        if v.is_zero() {
            return Err(EllipticError::VZero);
        }
        let b = &self.b;
        let radicand = ri(3) * u / (b + ri(1)) - ri(12);
        let root = Scalar::sqrt_rational(&radicand)?;
        let base = Scalar::Rat(v + (ri(3) * b - ri(2)) * u - self.k16());
        let du = Scalar::Rat(u.clone()) * root;
        let den = Scalar::Rat(ri(2) * v);
        Ok(((&base + &du) / den.clone(), (&base - &du) / den))
    }

    pub fn torsion_point(&self) -> PointQ {
        PointQ::new(Rational::zero(), self.k16())
    }

    pub fn free_generator(&self) -> PointQ {
        let b = &self.b;
        PointQ::new(ri(8) * b, ri(8) * b * (b + ri(2)))
    }

    /// The eight polynomial sections with deg u ≤ 2 over ℚ(b).
    pub fn section_candidates(&self) -> Vec<PointQ> {
        let b = &self.b;
        let b1 = b + ri(1);
        let b2 = b + ri(2);
        vec![
            PointQ::new(Rational::zero(), ri(16) * b * &b1),
            PointQ::new(ri(8) * b, ri(8) * b * &b2),
            PointQ::new(ri(-16) * b, ri(16) * b * (ri(4) * b - ri(1))),
            PointQ::new(ri(4) * &b1, ri(4) * &b1 * &b2),
            PointQ::new(ri(16) * &b1, ri(32) * &b1 * &b2),
            PointQ::new(ri(-8) * b * &b1, ri(8) * b * &b1 * &b2),
            PointQ::new(ri(16) * b * &b1, ri(16) * b * &b1 * (ri(5) * b + ri(1))),
            PointQ::new(
                Rational::new(BigInt::from(16), BigInt::from(9)) * (ri(1) - b) * (ri(1) + ri(2) * b),
                Rational::new(BigInt::from(32), BigInt::from(27)) * &b2 * (ri(7) * b * b + b + ri(1)),
            ),
        ]
    }

    pub fn mw_spec(&self, bound: u32) -> MWSpec {
        MWSpec {
            curve: self.curve.clone(),
            free_generators: vec![self.free_generator()],
            torsion_generators: vec![(self.torsion_point(), 3)],
            bound,
            label: None,
        }
    }
}

/// Fibration of S₄ by z: v² = u³ − 20Zu² + 108Z²u − 648(Z−1)², Z = z² − z + 1.
#[derive(Clone, Debug)]
pub struct E4Bundle {
    pub z: Rational,
    pub big_z: Rational,
    pub curve: CurveQ,
}

impl E4Bundle {
    pub fn new(z: Rational) -> Result<Self, EllipticError> {
        if z.is_zero() || z.is_one() {
            return Err(EllipticError::DegenerateFiber(format!("z = {}", fmt_rational(&z))));
        }
        let big_z = &z * &z - &z + ri(1);
        let zm = &big_z - ri(1);
        let curve = CurveQ::new(ri(-20) * &big_z, ri(108) * &big_z * &big_z, ri(-648) * &zm * &zm)?;
        Ok(E4Bundle { z, big_z, curve })
    }

    /// (b, c) on ₂F₁(−4, b; −c−3; z) = 0.
    pub fn to_surface(&self, p: &PointQ) -> Result<(Rational, Rational), EllipticError> {
        self.curve.check_point(p)?;
        let (u, v) = affine(p)?;
        let z = &self.z;
        let b = phi4(z, u, v)? - ri(1);
        let zi = ri(1) / z;
        let c = phi4(&zi, &(u * &zi * &zi), &(v * &zi * &zi * &zi))? - ri(1);
        Ok((b, c))
    }

    /// The six sections generating the rank-6 lattice over ℚ(z), specialized.
    pub fn generator_table(&self) -> Vec<PointQ> {
        let z = &self.z;
        let zz = &self.big_z;
        let z2 = z * z;
        let zm = z - ri(1);
        let zm2 = &zm * &zm;
        vec![
            PointQ::new(ri(6), ri(12) * (ri(2) * z - ri(1))),
            PointQ::new(ri(6) * &z2, ri(12) * &z2 * (ri(2) - z)),
            PointQ::new(ri(6) * &zm2, ri(12) * &zm2 * (z + ri(1))),
            PointQ::new(ri(9), ri(9) * (ri(2) * zz - ri(1))),
            PointQ::new(ri(9) * &z2, ri(9) * z * (&z2 - ri(2) * z + ri(2))),
            PointQ::new(ri(9) * &zm2, ri(9) * &zm * (&z2 + ri(1))),
        ]
    }

    pub fn mw_spec(&self, bound: u32) -> MWSpec {
        MWSpec {
            curve: self.curve.clone(),
            free_generators: self.generator_table(),
            torsion_generators: Vec::new(),
            bound,
            label: None,
        }
    }
}

fn phi4(z: &Rational, u: &Rational, v: &Rational) -> Result<Rational, EllipticError> {
    let zz = z * z - z + ri(1);
    let zz2 = &zz * &zz;
    let zz3 = &zz2 * &zz;
    let u2 = u * u;
    let u3 = &u2 * u;
    let w1 = (ri(5) * &zz - ri(3)) * &u3 + ri(6) * (ri(2) * &zz3 - ri(24) * &zz2 + ri(27) * &zz - ri(9)) * &u2
        - ri(4) * &zz * (ri(20) * &zz3 - ri(159) * &zz2 + ri(171) * &zz - ri(54)) * u
        + ri(72) * &zz2 * (&zz - ri(1)) * (ri(2) * &zz2 - ri(12) * &zz + ri(9));
    let num = ri(2) * (&u2 - ri(4) * &zz2 * u + ri(8) * &zz3 - ri(12) * &zz2) * (ri(1) - ri(2) * z) * v + ri(2) * w1;
    let q = &u2 - ri(12) * &zz * u + ri(12) * &zz2;
    let den = z * (ri(1) - z) * &q * &q;
    if den.is_zero() {
        return Err(EllipticError::DegenerateFiber("u² − 12Zu + 12Z² = 0".into()));
    }
    Ok(num / den)
}

/// One (c, z) lift of a point of E₄*, tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberPoint {
    pub c: Scalar,
    pub z: Scalar,
    pub field: String,
}

/// Symmetry invariants z(1−z), c(b+c+3) and cz + (b+c+3)(z−1) at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E4Invariants {
    pub zz: Rational,
    pub cc: Rational,
    pub k: Rational,
}

/// Quotient of the b-fibres of S₄ by z ↦ 1 − z:
/// v² = u(u² − 4b(5b+9)u + 108b(b+1)²(b+2)).
#[derive(Clone, Debug)]
pub struct E4StarBundle {
    pub b: Rational,
    pub curve: CurveQ,
}

impl E4StarBundle {
    pub fn new(b: Rational) -> Result<Self, EllipticError> {
        if [0, -1, -2, -3].iter().any(|&k| b == ri(k)) {
            return Err(EllipticError::ExcludedFiber(fmt_rational(&b)));
        }
        let b1 = &b + ri(1);
        let curve =
            CurveQ::new(ri(-4) * &b * (ri(5) * &b + ri(9)), ri(108) * &b * &b1 * &b1 * (&b + ri(2)), Rational::zero())?;
        Ok(E4StarBundle { b, curve })
    }

    fn k3(&self) -> Rational {
        let b = &self.b;
        b * (b + ri(1)) * (b + ri(2))
    }

    pub fn invariants(&self, p: &PointQ) -> Result<E4Invariants, EllipticError> {
        self.curve.check_point(p)?;
        let (u, v) = affine(p)?;
        let b = &self.b;
        let k3 = self.k3();
        let w2 = ri(8) * b * v + u * u - ri(4) * b * (b + ri(9)) * u + ri(108) * &k3 * (b + ri(9));
        if w2.is_zero() {
            return Err(EllipticError::WZero);
        }
        let b3 = b + ri(3);
        let zz = ri(-6) * (v + ri(2) * (ri(2) * b + ri(3)) * u - ri(36) * &k3) / &w2;
        let cc = ri(-216) * &k3 * &b3 * &b3 / &w2;
        let k =
            -&b3 * (ri(2) * (ri(4) * b + ri(3)) * v + u * u - ri(4) * b * &b3 * u + ri(108) * &k3 * (b + ri(5))) / &w2;
        Ok(E4Invariants { zz, cc, k })
    }

    /// Roots z of z² − z + z(1−z)-invariant, each paired with its c.
    pub fn fiber_image(&self, p: &PointQ) -> Result<Vec<FiberPoint>, EllipticError> {
        let inv = self.invariants(p)?;
        let b3 = Scalar::Rat(&self.b + ri(3));
        let disc = ri(1) - ri(4) * &inv.zz;
        if disc.is_zero() {
            return Err(EllipticError::DegenerateFiber("z = 1/2 is a double root".into()));
        }
        let root = Scalar::sqrt_rational(&disc)?;
        let half = Scalar::Rat(Rational::new(BigInt::one(), BigInt::from(2)));
        let one = Scalar::from_int(1);
        let k = Scalar::Rat(inv.k.clone());
        let cc = Scalar::Rat(inv.cc.clone());
        let mut out = Vec::with_capacity(2);
        for sign in [1i64, -1] {
            let z = (&one + &(&root * &Scalar::from_int(sign))) * half.clone();
            let two_z1 = Scalar::from_int(2) * z.clone() - one.clone();
            let c = (&k - &(&b3 * &(&z - &one))) / two_z1;
            if &c * &(&c + &b3) != cc {
                return Err(EllipticError::DegenerateFiber("c(b+c+3) pairing failed".into()));
            }
            let field = z.field_label();
            out.push(FiberPoint { c, z, field });
        }
        Ok(out)
    }

    /// √((v+4bu)² + 864b(b+1)(b+2)u) when it is rational, which is exactly when
    /// the two z-roots are rational (away from the 2-torsion point (0, 0), where
    /// the value is 0 but the z-roots need not be rational).
    pub fn square_filter(&self, p: &PointQ) -> Result<Option<Rational>, EllipticError> {
        self.curve.check_point(p)?;
        let (u, v) = affine(p)?;
        Ok(sqrt_detect(&self.filter_value(u, v)))
    }

    pub fn filter_value(&self, u: &Rational, v: &Rational) -> Rational {
        let t = v + ri(4) * &self.b * u;
        &t * &t + ri(864) * self.k3() * u
    }

    pub fn from_surface(&self, c: &Rational, z: &Rational) -> Result<PointQ, EllipticError> {
        let b = &self.b;
        let cc = c * (b + c + ri(3));
        if cc.is_zero() {
            return Err(EllipticError::DegenerateFiber("c(b+c+3) = 0".into()));
        }
        let l = b * z + c + ri(3) * z;
        let u = ri(-6) * self.k3() * &l * &l / &cc;
        let v = ri(12) * self.k3() * (b + ri(3)) * &l * (ri(2) * b * z + ri(2) * c + ri(3)) / &cc;
        Ok(PointQ::new(u, v))
    }

    pub fn free_generator(&self) -> PointQ {
        let b = &self.b;
        PointQ::new(ri(6) * b * (b + ri(1)), ri(12) * b * (b + ri(1)) * (b + ri(3)))
    }

    pub fn mw_spec(&self, bound: u32) -> MWSpec {
        MWSpec {
            curve: self.curve.clone(),
            free_generators: vec![self.free_generator()],
            torsion_generators: vec![(PointQ::new(Rational::zero(), Rational::zero()), 2)],
            bound,
            label: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::surfaces::{s3_residual, s4_residual, s4_residual_in};

    fn sample_bs() -> Vec<Rational> {
        let mut v = Vec::new();
        for n in -9..=9i64 {
            for d in [1, 2, 3, 5] {
                let b = rat(n, d);
                if ![0, -1, -2, -3].iter().any(|&k| b == int(k)) && !v.contains(&b) {
                    v.push(b);
                }
            }
        }
        v
    }

    #[test]
    fn e3_example_b_minus_7() {
        let e = E3Bundle::new(int(-7)).unwrap();
        assert_eq!(e.curve, CurveQ::from_ints(441, 28224, 451584).unwrap());
        let p = PointQ::ints(-48, -48);
        assert_eq!(e.to_surface(&p).unwrap(), (int(-15), int(-1)));
        assert_eq!(e.from_surface(&int(-15), &int(-1)).unwrap(), p);
        let (c, z) = e.to_surface(&PointQ::Infinity).unwrap();
        assert_eq!((c.clone(), z.clone()), (rat(5, 2), rat(1, 2)));
        assert!(s3_residual(&int(-7), &c, &z).is_zero());
        let (z2, z3) = e.companions(&p).unwrap();
        assert_eq!(z2, Scalar::quad(int(-4), int(1), 3).unwrap());
        assert_eq!(z3, Scalar::quad(int(-4), int(-1), 3).unwrap());
        for (u, v) in [(0, 672), (-56, 280), (-48, 48)] {
            assert!(e.curve.contains(&PointQ::ints(u, v)));
        }
    }

    #[test]
    fn e3_generic_sections() {
        for b in sample_bs() {
            let e = E3Bundle::new(b.clone()).unwrap();
            for p in e.section_candidates() {
                assert!(e.curve.contains(&p), "b = {} p = {}", b, p);
            }
            assert_eq!(e.curve.torsion_order(&e.torsion_point(), 6).unwrap(), Some(3));
            let g = e.free_generator();
            for n in 1..4 {
                let p = e.curve.scalar_mul(&g, n).unwrap();
                if let Ok((c, z)) = e.to_surface(&p) {
                    assert!(s3_residual(&b, &c, &z).is_zero());
                    assert_eq!(e.from_surface(&c, &z).unwrap(), p);
                }
            }
        }
    }

    #[test]
    fn e3_j_invariant() {
        for b in sample_bs() {
            let e = E3Bundle::new(b.clone()).unwrap();
            let b1 = &b + int(1);
            let b2 = &b + int(2);
            let q = int(9) * &b * &b + int(32) * &b + int(32);
            let expect = int(-27) * &b * &b * &q * &q * &q / (int(64) * &b1 * &b1 * &b1 * &b2 * &b2);
            assert_eq!(e.curve.j_invariant(), expect);
        }
    }

    #[test]
    fn e3_singular() {
        assert!(matches!(E3Bundle::new(int(-1)), Err(EllipticError::SingularFiber(_))));
    }

    #[test]
    fn e4_generators_and_map() {
        for z in [int(2), int(3), rat(1, 3), rat(-5, 2), rat(7, 4)] {
            let e = E4Bundle::new(z.clone()).unwrap();
            for p in e.generator_table() {
                assert!(e.curve.contains(&p));
                match e.to_surface(&p) {
                    Ok((b, c)) => assert!(s4_residual(&b, &c, &z).is_zero()),
                    Err(EllipticError::DegenerateFiber(_)) => {}
                    Err(err) => panic!("{err}"),
                }
            }
        }
        let e = E4Bundle::new(int(2)).unwrap();
        assert_eq!(e.to_surface(&PointQ::ints(6, 36)).unwrap(), (int(-3), int(0)));
        assert_eq!(e.to_surface(&PointQ::ints(9, 45)).unwrap(), (int(-2), int(-1)));
        assert_eq!(e.to_surface(&PointQ::ints(36, 36)).unwrap(), (int(-3), int(5)));
    }

    #[test]
    fn e4_sums_of_generators_land_on_surface() {
        let z = rat(5, 3);
        let e = E4Bundle::new(z.clone()).unwrap();
        let g = e.generator_table();
        let mut checked = 0;
        for i in 0..g.len() {
            for j in i..g.len() {
                let p = e.curve.add(&g[i], &g[j]).unwrap();
                if let Ok((b, c)) = e.to_surface(&p) {
                    assert!(s4_residual(&b, &c, &z).is_zero());
                    checked += 1;
                }
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn e4_section_b_leaves_linear_factor_in_c() {
        for z in [int(2), rat(3, 5), rat(-4, 7)] {
            let b = (&z + int(1)) * (&z + int(2)) / (int(3) * &z * (int(1) - &z));
            // s4 as a polynomial in c by interpolation at five points.
            let xs: Vec<Rational> = (0..5).map(int).collect();
            let ys: Vec<Rational> = xs.iter().map(|c| s4_residual(&b, c, &z)).collect();
            let p = lagrange(&xs, &ys);
            let split = crate::exact::split_roots(&p);
            assert!(!split.rational_roots.is_empty(), "no rational c at z = {}", z);
            for (c, _) in &split.rational_roots {
                assert!(s4_residual(&b, c, &z).is_zero());
            }
        }
    }

    fn lagrange(xs: &[Rational], ys: &[Rational]) -> crate::exact::Poly<Rational> {
        use crate::exact::Poly;
        let mut acc = Poly::zero();
        for (i, xi) in xs.iter().enumerate() {
            let mut term = Poly::constant(ys[i].clone());
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    let f = Poly::new(vec![-xj.clone(), int(1)]).scale(&(int(1) / (xi - xj)));
                    term = &term * &f;
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    #[test]
    fn e4star_m7_chain() {
        let e = E4StarBundle::new(rat(-7, 2)).unwrap();
        assert_eq!(e.curve.a2, int(-119));
        assert_eq!(e.curve.a4, rat(14175, 4));
        let p = PointQ::ints(60, 15);
        assert_eq!(e.filter_value(&int(60), &int(15)), int(225));
        assert_eq!(e.square_filter(&p).unwrap(), Some(int(15)));
        let inv = e.invariants(&p).unwrap();
        assert_eq!(inv.zz, int(-12));
        assert_eq!(inv.cc, int(189));
        let img = e.fiber_image(&p).unwrap();
        let pairs: Vec<(Scalar, Scalar)> = img.iter().map(|f| (f.c.clone(), f.z.clone())).collect();
        assert!(pairs.contains(&(Scalar::from_int(14), Scalar::from_int(4))));
        assert!(pairs.contains(&(Scalar::Rat(rat(-27, 2)), Scalar::from_int(-3))));
        for f in &img {
            assert!(s4_residual_in(&Scalar::Rat(e.b.clone()), &f.c, &f.z).is_zero());
            let (c, z) = (f.c.as_rational().unwrap(), f.z.as_rational().unwrap());
            let back = e.from_surface(c, z).unwrap();
            assert_eq!(back, p);
        }
    }

    #[test]
    fn e4star_filter_constants() {
        let b7 = E4StarBundle::new(rat(-7, 2)).unwrap();
        let b8 = E4StarBundle::new(rat(-9, 2)).unwrap();
        assert_eq!(int(864) * b7.k3(), int(-11340));
        assert_eq!(int(864) * b8.k3(), int(-34020));
        assert_eq!(int(4) * &b7.b, int(-14));
        assert_eq!(int(4) * &b8.b, int(-18));
    }

    #[test]
    fn e4star_generic() {
        for b in sample_bs() {
            let e = match E4StarBundle::new(b.clone()) {
                Ok(e) => e,
                Err(EllipticError::SingularFiber(_)) => continue,
                Err(err) => panic!("{err}"),
            };
            assert!(e.curve.contains(&e.free_generator()));
            let t = PointQ::new(int(0), int(0));
            assert_eq!(e.curve.torsion_order(&t, 4).unwrap(), Some(2));
            for n in 1..3 {
                let p = e.curve.scalar_mul(&e.free_generator(), n).unwrap();
                if let Ok(img) = e.fiber_image(&p) {
                    for f in img {
                        assert!(s4_residual_in(&Scalar::Rat(b.clone()), &f.c, &f.z).is_zero());
                    }
                }
            }
        }
        assert!(matches!(E4StarBundle::new(int(-3)), Err(EllipticError::ExcludedFiber(_))));
    }
}
