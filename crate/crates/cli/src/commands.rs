use std::io::Read;
use std::path::Path;

use belyi_core::belyi::{
    certify as certify_map, dedup_orbit, enumerate_form11, enumerate_form2, BelyiError, BelyiMap, DegeneracyReport,
    MapRecord,
};
use belyi_core::elliptic::{mw_enumerate, period_density, specialize, DensityReport, PointQ};
use belyi_core::exact::poly::coeff_strings;
use belyi_core::exact::{fmt_rational, Rational, Scalar};
use belyi_core::hypergeom::{hpg_eval, hpg_poly, HpgSpec};
use belyi_core::pell::{pell_to_candidates, solve_pell, Form2Input, PellCandidate};
use belyi_core::surfaces::{s3_param, s3_residual, s3_split_param, s4_param, s4_residual};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::args::nonneg;
use crate::output::{cell, json, key_values, table, Format};
use crate::Failure;
use crate::{DedupArg, EcCmd, EnumerateArgs, FormArg, GlobalOpts, HpgCmd, SurfaceCmd, SurfaceKind};

type Outcome = Result<(i32, String), Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::usage(msg))
}

fn render<T: Serialize>(v: &T, g: &GlobalOpts) -> Result<String, Failure> {
    match g.format {
        Format::Json => json(v, g.pretty),
        Format::Table => key_values(v),
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(s) = std::env::var("BELYI_THREADS") {
        match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => b = b.num_threads(n),
            _ => return usage(format!("BELYI_THREADS must be a positive integer, got {s:?}")),
        }
    }
    b.build().map_err(|e| Failure { code: 2, message: format!("cannot start workers: {e}") })
}

#[derive(Serialize)]
struct Case {
    form: &'static str,
    p: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<i64>,
    r: i64,
    m: usize,
    report: DegeneracyReport,
    /// Parameter polynomial in λ (two-linear) or z = 4β/α² (one-quadratic).
    polynomial: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_zero_map: Option<bool>,
    maps: Vec<MapRecord>,
    /// Factors of degree ≥ 3 left unsolved.
    unresolved: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct Single<'a> {
    schema: u32,
    #[serde(flatten)]
    case: &'a Case,
}

#[derive(Serialize)]
struct Skipped {
    p: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<i64>,
    r: i64,
    m: usize,
    reason: String,
}

#[derive(Serialize)]
struct Grid<'a> {
    schema: u32,
    cases: Vec<&'a Case>,
    skipped: Vec<Skipped>,
}

type Params = (i64, Option<i64>, i64, usize);

fn records(maps: Vec<BelyiMap>, a: &EnumerateArgs) -> Vec<MapRecord> {
    let maps = if a.dedup == Some(DedupArg::Orbit) { dedup_orbit(maps) } else { maps };
    maps.iter()
        .map(|map| {
            let rec = MapRecord::new(map, Some(certify_map(map)));
            if a.rescale {
                rec.rescaled(map)
            } else {
                rec
            }
        })
        .collect()
}

fn run_case(a: &EnumerateArgs, (p, q, r, m): Params) -> Result<Case, BelyiError> {
    let unresolved = |u: &belyi_core::Poly<Rational>| if u.deg() > 0 { vec![coeff_strings(u)] } else { vec![] };
    match q {
        Some(q) => {
            let (sol, maps) = enumerate_form11(p, q, r, m)?;
            Ok(Case {
                form: "two-linear",
                p,
                q: Some(q),
                r,
                m,
                report: sol.report,
                polynomial: coeff_strings(&sol.polynomial),
                alpha_zero_map: None,
                maps: records(maps, a),
                unresolved: unresolved(&sol.roots.unresolved),
            })
        }
        None => {
            let (sol, maps) = enumerate_form2(p, r, m)?;
            Ok(Case {
                form: "one-quadratic",
                p,
                q: None,
                r,
                m,
                report: sol.report,
                polynomial: coeff_strings(&sol.polynomial),
                alpha_zero_map: Some(sol.alpha_zero_map),
                maps: records(maps, a),
                unresolved: unresolved(&sol.z_roots.unresolved),
            })
        }
    }
}

pub fn enumerate(a: &EnumerateArgs, g: &GlobalOpts) -> Outcome {
    let ms = nonneg(&a.m.0, "-m")?;
    let qs: Vec<Option<i64>> = match (a.form, &a.q) {
        (FormArg::TwoLinear, Some(q)) => q.0.iter().map(|&x| Some(x)).collect(),
        (FormArg::TwoLinear, None) => return usage("-q is required for --form two-linear"),
        (FormArg::OneQuadratic, Some(_)) => return usage("-q applies only to --form two-linear"),
        (FormArg::OneQuadratic, None) => vec![None],
    };
    let mut params: Vec<Params> = Vec::new();
    for &p in &a.p.0 {
        for &q in &qs {
            for &r in &a.r.0 {
                for &m in &ms {
                    params.push((p, q, r, m));
                }
            }
        }
    }
    let pool = thread_pool()?;
    let results: Vec<Result<Case, BelyiError>> = pool.install(|| params.par_iter().map(|t| run_case(a, *t)).collect());
    let total: usize = results.iter().filter_map(|r| r.as_ref().ok()).map(|c| c.maps.len()).sum();
    let code = if total > 0 { 0 } else { 1 };
    if params.len() == 1 {
        let case = match &results[0] {
            Ok(c) => c,
            Err(e) => return usage(e.to_string()),
        };
        let text = match g.format {
            Format::Json => json(&Single { schema: 1, case }, g.pretty)?,
            Format::Table => map_table(&[case]),
        };
        return Ok((code, text));
    }
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for (t, res) in params.iter().zip(&results) {
        match res {
            Ok(c) => cases.push(c),
            Err(e) => skipped.push(Skipped { p: t.0, q: t.1, r: t.2, m: t.3, reason: e.to_string() }),
        }
    }
    let text = match g.format {
        Format::Json => json(&Grid { schema: 1, cases, skipped }, g.pretty)?,
        Format::Table => map_table(&cases),
    };
    Ok((code, text))
}

fn map_table(cases: &[&Case]) -> String {
    let mut rows = Vec::new();
    for c in cases {
        let class = serde_json::to_value(c.report).ok().and_then(|v| v.get("class").map(cell)).unwrap_or_default();
        for rec in &c.maps {
            let valid = rec.certificate.as_ref().map_or("-".to_string(), |x| x.valid.to_string());
            rows.push(vec![
                c.form.to_string(),
                c.p.to_string(),
                c.q.map_or("-".into(), |q| q.to_string()),
                c.r.to_string(),
                c.m.to_string(),
                class.clone(),
                rec.field.clone(),
                valid,
                rec.display.clone().unwrap_or_default(),
            ]);
        }
    }
    table(&["form", "p", "q", "r", "m", "class", "field", "valid", "map"], &rows)
}

#[derive(Serialize)]
struct CertEntry {
    index: usize,
    form: String,
    p: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<i64>,
    r: i64,
    m: usize,
    field: String,
    display: String,
    certificate: belyi_core::belyi::BelyiCertificate,
}

#[derive(Serialize)]
struct CertOut {
    schema: u32,
    records: usize,
    valid: usize,
    certificates: Vec<CertEntry>,
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// Map records in a single record, an array, or `enumerate` output.
fn collect_records(v: Value, out: &mut Vec<Value>) {
    match v {
        Value::Array(items) => items.into_iter().for_each(|x| collect_records(x, out)),
        Value::Object(mut obj) => {
            if let Some(cases) = obj.remove("cases") {
                collect_records(cases, out);
            } else if let Some(maps) = obj.remove("maps") {
                collect_records(maps, out);
            } else {
                out.push(Value::Object(obj));
            }
        }
        other => out.push(other),
    }
}

pub fn certify(input: &Path, g: &GlobalOpts) -> Outcome {
    let text = read_input(input)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid JSON: {e}")))?;
    let mut raw = Vec::new();
    collect_records(v, &mut raw);
    let mut certificates = Vec::with_capacity(raw.len());
    for (index, item) in raw.into_iter().enumerate() {
        let rec: MapRecord =
            serde_json::from_value(item).map_err(|e| Failure::usage(format!("record {index}: {e}")))?;
        let map = rec.to_map().map_err(|e| Failure::usage(format!("record {index}: {e}")))?;
        certificates.push(CertEntry {
            index,
            form: rec.form.clone(),
            p: rec.p,
            q: rec.q,
            r: rec.r,
            m: rec.m,
            field: rec.field.clone(),
            display: map.display_scaled(&Rational::one()),
            certificate: certify_map(&map),
        });
    }
    let valid = certificates.iter().filter(|c| c.certificate.valid).count();
    let records = certificates.len();
    let code = if records > 0 && valid == records { 0 } else { 1 };
    let text = match g.format {
        Format::Json => json(&CertOut { schema: 1, records, valid, certificates }, g.pretty)?,
        Format::Table => {
            let rows: Vec<Vec<String>> = certificates
                .iter()
                .map(|c| {
                    let k = &c.certificate;
                    vec![
                        c.index.to_string(),
                        k.degree.to_string(),
                        k.vanishing_order.map_or("-".into(), |x| x.to_string()),
                        k.total_points.to_string(),
                        k.valid.to_string(),
                        c.display.clone(),
                    ]
                })
                .collect();
            table(&["index", "degree", "order", "points", "valid", "map"], &rows)
        }
    };
    Ok((code, text))
}

#[derive(Serialize)]
struct SurfaceEval {
    schema: u32,
    surface: &'static str,
    b: String,
    c: String,
    z: String,
    residual: String,
    on_surface: bool,
}

#[derive(Serialize)]
struct SurfacePoint {
    schema: u32,
    surface: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    e: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    b: String,
    c: String,
    z: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    positive_region: Option<bool>,
}

#[derive(Serialize)]
struct SurfaceSplit {
    schema: u32,
    t: String,
    y: String,
    b: String,
    c: String,
    e: String,
    s: String,
    roots: Vec<String>,
}

fn name(kind: SurfaceKind) -> &'static str {
    match kind {
        SurfaceKind::Cubic => "cubic",
        SurfaceKind::Quartic => "quartic",
    }
}

pub fn surface(cmd: &SurfaceCmd, g: &GlobalOpts) -> Outcome {
    let f = fmt_rational;
    let text = match cmd {
        SurfaceCmd::Eval { kind, b, c, z } => {
            let residual = match kind {
                SurfaceKind::Cubic => s3_residual(b, c, z),
                SurfaceKind::Quartic => s4_residual(b, c, z),
            };
            render(
                &SurfaceEval {
                    schema: 1,
                    surface: name(*kind),
                    b: f(b),
                    c: f(c),
                    z: f(z),
                    on_surface: residual.is_zero(),
                    residual: f(&residual),
                },
                g,
            )?
        }
        SurfaceCmd::Param { kind: SurfaceKind::Cubic, e, z, t, y } => {
            let (Some(e), Some(z), None, None) = (e, z, t, y) else {
                return usage("the cubic chart takes --e and --z");
            };
            let pt = s3_param(e, z).map_err(|x| Failure::usage(x.to_string()))?;
            render(
                &SurfacePoint {
                    schema: 1,
                    surface: "cubic",
                    e: Some(f(e)),
                    t: None,
                    y: None,
                    b: f(&pt.b),
                    c: f(&pt.c),
                    z: f(&pt.z),
                    positive_region: Some(pt.positive_region),
                },
                g,
            )?
        }
        SurfaceCmd::Param { kind: SurfaceKind::Quartic, e, z, t, y } => {
            let (None, None, Some(t), Some(y)) = (e, z, t, y) else {
                return usage("the quartic chart takes --t and --y");
            };
            let (b, c, zz) = s4_param(t, y).map_err(|x| Failure::usage(x.to_string()))?;
            render(
                &SurfacePoint {
                    schema: 1,
                    surface: "quartic",
                    e: None,
                    t: Some(f(t)),
                    y: Some(f(y)),
                    b: f(&b),
                    c: f(&c),
                    z: f(&zz),
                    positive_region: None,
                },
                g,
            )?
        }
        SurfaceCmd::Split { t, y } => {
            let s = s3_split_param(t, y).map_err(|x| Failure::usage(x.to_string()))?;
            render(
                &SurfaceSplit {
                    schema: 1,
                    t: f(t),
                    y: f(y),
                    b: f(&s.b),
                    c: f(&s.c),
                    e: f(&s.e),
                    s: f(&s.s),
                    roots: s.roots.iter().map(f).collect(),
                },
                g,
            )?
        }
    };
    Ok((0, text))
}

#[derive(Serialize)]
struct Image {
    p_over_r: Scalar,
    z: Scalar,
    #[serde(skip_serializing_if = "is_q")]
    field: String,
}

fn is_q(s: &str) -> bool {
    s == "Q"
}

#[derive(Serialize)]
struct PointImage {
    point: PointQ,
    images: Vec<Image>,
    /// All images satisfy the hypergeometric relation exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    residual_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Serialize)]
struct PointsOut {
    schema: u32,
    m: u32,
    curve: String,
    label: &'static str,
    bound: u32,
    count: usize,
    points: Vec<PointImage>,
}

#[derive(Serialize)]
struct DensityOut<'a> {
    schema: u32,
    approx: bool,
    #[serde(flatten)]
    report: &'a DensityReport,
}

pub fn ec(cmd: &EcCmd, g: &GlobalOpts) -> Outcome {
    let err = |e: belyi_core::elliptic::EllipticError| Failure::usage(e.to_string());
    match cmd {
        EcCmd::Points { m, bound } => {
            let s = specialize(*m).map_err(err)?;
            let pts = mw_enumerate(&s.mw_spec(*bound), false).map_err(err)?;
            let pool = thread_pool()?;
            let points: Vec<PointImage> = pool.install(|| {
                pts.par_iter()
                    .map(|p| match s.image(p) {
                        Ok(imgs) => PointImage {
                            point: p.clone(),
                            residual_zero: Some(imgs.iter().all(|i| s.residual(i).is_zero())),
                            images: imgs
                                .into_iter()
                                .map(|i| Image { p_over_r: i.p_over_r, z: i.z, field: i.field })
                                .collect(),
                            note: None,
                        },
                        Err(e) => PointImage {
                            point: p.clone(),
                            images: vec![],
                            residual_zero: None,
                            note: Some(e.to_string()),
                        },
                    })
                    .collect()
            });
            let code = if points.is_empty() { 1 } else { 0 };
            let out = PointsOut {
                schema: 1,
                m: *m,
                curve: s.curve.to_string(),
                label: s.label,
                bound: *bound,
                count: points.len(),
                points,
            };
            let text = match g.format {
                Format::Json => json(&out, g.pretty)?,
                Format::Table => {
                    let rows: Vec<Vec<String>> = out
                        .points
                        .iter()
                        .map(|pi| {
                            let imgs: Vec<String> =
                                pi.images.iter().map(|i| format!("p/r={} z={}", i.p_over_r, i.z)).collect();
                            vec![pi.point.to_string(), pi.note.clone().unwrap_or_else(|| imgs.join("; "))]
                        })
                        .collect();
                    table(&["point", "images"], &rows)
                }
            };
            Ok((code, text))
        }
        EcCmd::Map { m, point } => {
            let s = specialize(*m).map_err(err)?;
            let imgs: Vec<Image> = s
                .image(point)
                .map_err(err)?
                .into_iter()
                .map(|i| Image { p_over_r: i.p_over_r, z: i.z, field: i.field })
                .collect();
            let text = if imgs.len() == 1 { render(&imgs[0], g)? } else { render(&imgs, g)? };
            Ok((if imgs.is_empty() { 1 } else { 0 }, text))
        }
        EcCmd::Density { m, tolerance } => {
            if tolerance.is_nan() || *tolerance <= 0.0 {
                return usage("--tolerance must be positive");
            }
            let report = period_density(*m, *tolerance).map_err(err)?;
            Ok((0, render(&DensityOut { schema: 1, approx: true, report: &report }, g)?))
        }
    }
}

#[derive(Serialize)]
struct PellEntry<'a> {
    #[serde(flatten)]
    candidate: &'a PellCandidate,
    #[serde(skip_serializing_if = "Option::is_none")]
    inputs: Option<Vec<Form2Input>>,
}

#[derive(Serialize)]
struct PellOut<'a> {
    schema: u32,
    d: i64,
    n_max: u32,
    candidates: Vec<PellEntry<'a>>,
}

pub fn pell(d: i64, n_max: u32, g: &GlobalOpts) -> Outcome {
    let cands = solve_pell(d, n_max).map_err(|e| Failure::usage(e.to_string()))?;
    let candidates: Vec<PellEntry> =
        cands.iter().map(|c| PellEntry { candidate: c, inputs: pell_to_candidates(c).ok() }).collect();
    let code = if candidates.is_empty() { 1 } else { 0 };
    let text = match g.format {
        Format::Json => json(&PellOut { schema: 1, d, n_max, candidates }, g.pretty)?,
        Format::Table => {
            let rows: Vec<Vec<String>> = cands
                .iter()
                .map(|c| {
                    vec![
                        c.n.to_string(),
                        format!("{:?}", c.family),
                        c.m.to_string(),
                        format!("{}, {}", fmt_rational(&c.z_roots.0), fmt_rational(&c.z_roots.1)),
                        format!("{}, {}", fmt_rational(&c.companion_z_roots.0), fmt_rational(&c.companion_z_roots.1)),
                        c.parity_valid.to_string(),
                    ]
                })
                .collect();
            table(&["n", "family", "m", "z", "companion z", "parity_valid"], &rows)
        }
    };
    Ok((code, text))
}

#[derive(Serialize)]
struct HpgOut {
    schema: u32,
    #[serde(rename = "N")]
    n: usize,
    b: String,
    c: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    coefficients: Option<Vec<String>>,
}

pub fn hpg(cmd: &HpgCmd, g: &GlobalOpts) -> Outcome {
    let HpgCmd::Eval { n, b, c, z } = cmd;
    let spec = HpgSpec::new(*n, b.clone(), c.clone());
    let err = |e: belyi_core::hypergeom::HypergeomError| Failure::usage(e.to_string());
    let mut out =
        HpgOut { schema: 1, n: *n, b: fmt_rational(b), c: fmt_rational(c), z: None, value: None, coefficients: None };
    match z {
        Some(z) => {
            out.z = Some(fmt_rational(z));
            out.value = Some(fmt_rational(&hpg_eval(&spec, z).map_err(err)?));
        }
        None => out.coefficients = Some(coeff_strings(&hpg_poly(&spec).map_err(err)?)),
    }
    Ok((0, render(&out, g)?))
}
