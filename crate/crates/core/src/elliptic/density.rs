//! Real periods of E₅ and E₆ and the share of the period where p/r > 0.
//!
//! Rational points equidistribute with respect to du/v, so the measure of
//! the region where the Belyi parameter is positive, divided by the real
//! period, predicts how often positive values occur.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::specialize::specialize;
use super::EllipticError;

/// Numerator line of p/r = (L₀ − L₁u − L₂v)/(4v) on the specialized curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignLine {
    pub l0: f64,
    pub l1: f64,
    pub l2: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubIntegral {
    pub lo: f64,
    pub hi: f64,
    /// "oval" or "infinite"
    pub component: &'static str,
    /// +1 for v > 0, −1 for v < 0
    pub branch: i8,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    pub m: u32,
    /// Real period from three times the integral over a torsion-shifted interval on the oval.
    pub rho: f64,
    /// The same period from an interval on the infinite branch.
    pub rho_alt: f64,
    pub sub_integrals: Vec<SubIntegral>,
    /// ρ / (positive measure) − 1, on the oval and on the infinite branch.
    pub odds_ratio_oval: f64,
    pub odds_ratio_infinite: f64,
    pub curve_roots: [f64; 3],
    pub breakpoints: Vec<f64>,
}

struct DensityData {
    line: SignLine,
    oval: (i64, i64),
    infinite: (i64, i64),
}

fn data(m: u32) -> Result<DensityData, EllipticError> {
    match m {
        5 => Ok(DensityData { line: SignLine { l0: 645.0, l1: 15.0, l2: 11.0 }, oval: (-45, -5), infinite: (51, 315) }),
        6 => Ok(DensityData {
            line: SignLine { l0: 5901.0, l1: 63.0, l2: 13.0 },
            oval: (-133, 35),
            infinite: (107, 707),
        }),
        _ => Err(EllipticError::UnsupportedDegree(m)),
    }
}

pub fn sign_line(m: u32) -> Result<SignLine, EllipticError> {
    Ok(data(m)?.line)
}

pub fn period_density(m: u32, tolerance: f64) -> Result<DensityReport, EllipticError> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(EllipticError::QuadratureFailure("tolerance must be positive".into()));
    }
    let d = data(m)?;
    let curve = specialize(m)?.curve;
    let a = [curve.a2.to_f64().unwrap(), curve.a4.to_f64().unwrap(), curve.a6.to_f64().unwrap()];
    let roots = real_cubic_roots(a[0], a[1], a[2]);
    if roots.len() != 3 {
        return Err(EllipticError::QuadratureFailure("curve has one real component".into()));
    }
    let e = [roots[0], roots[1], roots[2]];
    let cubic = Cubic { a, e };

    let rho = 3.0 * cubic.integrate(d.oval.0 as f64, d.oval.1 as f64, None, tolerance)?;
    let rho_alt = 3.0 * cubic.integrate(d.infinite.0 as f64, d.infinite.1 as f64, None, tolerance)?;

    // L₂²f(u) − (L₀ − L₁u)² vanishes where the sign line meets the curve.
    let SignLine { l0, l1, l2 } = d.line;
    let k = l2 * l2;
    let g = [(k * a[0] - l1 * l1) / k, (k * a[1] + 2.0 * l0 * l1) / k, (k * a[2] - l0 * l0) / k];
    let breakpoints: Vec<f64> =
        real_cubic_roots(g[0], g[1], g[2]).into_iter().filter(|&r| cubic.eval(r) >= -1e-9).collect();

    let positive = |u: f64, sigma: f64| sigma * (l0 - l1 * u) - l2 * cubic.eval(u).max(0.0).sqrt() > 0.0;
    let mut subs = Vec::new();
    for (component, lo, hi) in [("oval", e[0], Some(e[1])), ("infinite", e[2], None)] {
        for sigma in [1.0f64, -1.0] {
            let mut cuts = vec![lo];
            let mut inner: Vec<f64> = breakpoints
                .iter()
                .copied()
                .filter(|&r| r > lo && hi.is_none_or(|h| r < h) && (l0 - l1 * r) * sigma > 0.0)
                .collect();
            inner.sort_by(|x, y| x.partial_cmp(y).unwrap());
            cuts.extend(inner);
            let top = hi.unwrap_or(f64::INFINITY);
            cuts.push(top);
            for w in cuts.windows(2) {
                let (x, y) = (w[0], w[1]);
                let mid = if y.is_finite() { 0.5 * (x + y) } else { x + 1.0 + x.abs() * 4.0 };
                if !positive(mid, sigma) {
                    continue;
                }
                if !y.is_finite() {
                    return Err(EllipticError::QuadratureFailure("positive region is unbounded".into()));
                }
                let anchor_lo = (x == lo).then_some(lo);
                let anchor_hi = hi.filter(|&h| y == h);
                let value =
                    cubic.integrate(x, y, anchor_lo.or(anchor_hi).map(|r| (r, anchor_lo.is_some())), tolerance)?;
                subs.push(SubIntegral { lo: x, hi: y, component, branch: sigma as i8, value });
            }
        }
    }
    subs.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap());

    let share = |c: &str| subs.iter().filter(|s| s.component == c).map(|s| s.value).sum::<f64>();
    Ok(DensityReport {
        m,
        rho,
        rho_alt,
        odds_ratio_oval: rho / share("oval") - 1.0,
        odds_ratio_infinite: rho / share("infinite") - 1.0,
        sub_integrals: subs,
        curve_roots: e,
        breakpoints,
    })
}

struct Cubic {
    a: [f64; 3],
    e: [f64; 3],
}

impl Cubic {
    fn eval(&self, u: f64) -> f64 {
        ((u + self.a[0]) * u + self.a[1]) * u + self.a[2]
    }

    /// |f(u)| / |u − r| using the factored form, r one of the roots.
    fn cofactor(&self, u: f64, r: f64) -> f64 {
        let i = (0..3).min_by(|&i, &j| (self.e[i] - r).abs().partial_cmp(&(self.e[j] - r).abs()).unwrap()).unwrap();
        (0..3).filter(|&j| j != i).map(|j| (u - self.e[j]).abs()).product()
    }

    /// ∫ du/√f over [lo, hi]. With an anchor (root, at_lo) the substitution
    /// u = root ± s² removes the inverse square root singularity.
    fn integrate(&self, lo: f64, hi: f64, anchor: Option<(f64, bool)>, tol: f64) -> Result<f64, EllipticError> {
        if anchor.is_none() && self.e.iter().any(|&r| r > lo && r < hi) {
            return Err(EllipticError::QuadratureFailure(format!("[{lo}, {hi}] contains a root of the cubic")));
        }
        match anchor {
            None => adaptive(&|u| 1.0 / self.eval(u).sqrt(), lo, hi, tol, 0),
            Some((r, at_lo)) => {
                let len = (hi - lo).sqrt();
                let f = |s: f64| {
                    let u = if at_lo { r + s * s } else { r - s * s };
                    2.0 / self.cofactor(u, r).sqrt()
                };
                adaptive(&f, 0.0, len, tol, 0)
            }
        }
    }
}

/// Double-exponential rule, bisected until the halves agree with the whole.
fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64, EllipticError> {
    let whole = quadrature::double_exponential::integrate(f, a, b, tol * 0.1);
    let mid = 0.5 * (a + b);
    let left = quadrature::double_exponential::integrate(f, a, mid, tol * 0.05);
    let right = quadrature::double_exponential::integrate(f, mid, b, tol * 0.05);
    let halves = left.integral + right.integral;
    if !halves.is_finite() {
        return Err(EllipticError::QuadratureFailure(format!("non-finite value on [{a}, {b}]")));
    }
    if (whole.integral - halves).abs() < tol {
        return Ok(halves);
    }
    if depth >= 24 {
        return Err(EllipticError::QuadratureFailure(format!("no convergence on [{a}, {b}]")));
    }
    Ok(adaptive(f, a, mid, tol * 0.5, depth + 1)? + adaptive(f, mid, b, tol * 0.5, depth + 1)?)
}

/// Real roots of x³ + a x² + b x + c, ascending, Newton-polished.
pub fn real_cubic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let shift = -a / 3.0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc < 0.0 {
        let r = (-p / 3.0).sqrt();
        let phi = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0).acos();
        (0..3).map(|k| 2.0 * r * ((phi + 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos() + shift).collect()
    } else {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() + shift]
    };
    for x in roots.iter_mut() {
        for _ in 0..8 {
            let fx = ((*x + a) * *x + b) * *x + c;
            let dfx = (3.0 * *x + 2.0 * a) * *x + b;
            if dfx == 0.0 {
                break;
            }
            *x -= fx / dfx;
        }
    }
    roots.sort_by(|x, y| x.partial_cmp(y).unwrap());
    roots
}
