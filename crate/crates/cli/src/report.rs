//! JSON and text rendering, plus the cross-checks behind `verify` and `report`.

use hartogs::cech::{
    formula_route_spectrum, graded_reduced_spectrum, justification_trail, CohomologyError, IndiscreteModel,
};
use hartogs::envelope::{log_convex_hull, log_image, stein_certificate, EnvelopeError, LOG_TOL};
use hartogs::numeric::{
    density_decay, geometric_taylor, least_squares_inverse, obstruction_bound,
    DecayFit, LaurentPolynomial, Tolerances, TorusSamples, TorusSpec,
};
use hartogs::{
    classify_product_pair, cohomology, CohomClass, CohomologyReport, Exec, Factor1D, HartogsFigure, LaurentModel,
    Radius, ReinhardtBoxDomain, Spectrum,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Round every float to 12 significant digits so output is byte-stable.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
            *v = json!(r);
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    let mut v = serde_json::to_value(x).expect("report types serialize");
    round_floats(&mut v);
    v
}

pub fn render_json(v: &Value) -> String {
    let mut out = serde_json::to_string_pretty(v).expect("values serialize");
    out.push('\n');
    out
}

/// All cohomology groups the report covers: `0 ≤ p ≤ N`, `q ∈ {0, 1, 2}`.
pub fn all_reports(h: &HartogsFigure) -> Result<Vec<CohomologyReport>, CohomologyError> {
    let mut out = Vec::new();
    for q in 0..=2 {
        for p in 0..=h.dim() as i64 {
            out.push(cohomology(h, p, q)?);
        }
    }
    Ok(out)
}

fn model_text(m: &LaurentModel) -> String {
    if m.is_empty() {
        "0".into()
    } else {
        m.to_string()
    }
}

pub fn cohomology_text(r: &CohomologyReport) -> String {
    let (p, q) = r.bidegree;
    let card = match r.cardinality {
        hartogs::Cardinality::Zero => "zero",
        hartogs::Cardinality::Uncountable => "uncountable",
    };
    let mut s = format!("H^{{{p},{q}}}: {} ({card} dimension), multiplicity {}\n", r.class, r.multiplicity);
    s += &format!("  reduced spectrum: {}\n", r.reduced.spectrum());
    s += &format!("  reduced model: {}\n", model_text(&r.reduced));
    if let Some(IndiscreteModel { numerator, denominator }) = &r.indiscrete_model {
        s += &format!("  indiscrete numerator: {}\n", model_text(numerator));
        s += &format!("  indiscrete denominator: {}\n", model_text(denominator));
    }
    s += "  justification:\n";
    for (id, anchor, statement) in justification_trail(r) {
        s += &format!("    {id} [{anchor}] {statement}\n");
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Verification {
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub decay: Vec<(String, DecayFit)>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    /// gnuplot-compatible `N error` blocks, one per density configuration.
    pub fn decay_table(&self) -> String {
        let mut s = String::from("# degree sup_error\n");
        if self.decay.is_empty() {
            s += "# no disc-in-disc pair to measure\n";
        }
        for (label, fit) in &self.decay {
            s += &format!("# {label} fitted_ratio={:.6} predicted_ratio={:.6}\n", fit.fitted_ratio, fit.predicted_ratio);
            for (n, e) in &fit.errors {
                s += &format!("{n} {e:.6e}\n");
            }
            s += "\n\n";
        }
        s
    }
}

pub struct VerifyOptions {
    pub window: u32,
    pub nodes: usize,
    pub seed: u64,
}

/// Two distinct circles inside a factor, away from the origin so monomial
/// magnitudes stay within a few decades of each other.
fn interior_radii(f: &Factor1D) -> (f64, f64) {
    let outer = f.outer();
    match f.inner() {
        None => (0.75 * outer.to_f64(), outer.to_f64() * 2.0 / 3.0),
        Some(inner) => {
            let r = inner.to_f64();
            if outer == Radius::Infinite {
                (2.0 * r, 3.0 * r)
            } else {
                let big = outer.to_f64();
                ((r * big).sqrt(), r.powf(2.0 / 3.0) * big.powf(1.0 / 3.0))
            }
        }
    }
}

fn oracle_check(h: &HartogsFigure, reduced: &Spectrum, window: u32, v: &mut Verification) {
    let engine = reduced.enumerate_window(window);
    let oracle = graded_reduced_spectrum(h, window);
    v.push(
        "graded_oracle",
        engine == oracle,
        json!({ "window": window, "engine_points": engine.len(), "oracle_points": oracle.len() }),
    );
}

/// Samples per torus stay below this so high-dimensional figures remain cheap.
const MAX_TORUS_SAMPLES: usize = 1 << 16;

fn quadrature_checks(h: &HartogsFigure, opts: &VerifyOptions, v: &mut Verification) {
    let tol = Tolerances::default();
    let u12 = h.cover().u12;
    let radii = |pick: fn((f64, f64)) -> f64| u12.factors().iter().map(|f| pick(interior_radii(f))).collect::<Vec<_>>();
    if let Err(e) = TorusSpec::new(radii(|r| r.0), opts.nodes) {
        v.push("quadrature_recovery", false, json!({ "error": e.to_string() }));
        return;
    }
    let mut nodes = opts.nodes;
    while nodes > 4 && nodes.checked_pow(h.dim() as u32).is_none_or(|n| n > MAX_TORUS_SAMPLES) {
        nodes /= 2;
    }
    let t1 = TorusSpec::new(radii(|r| r.0), nodes).expect("validated above");
    let t2 = TorusSpec::new(radii(|r| r.1), nodes).expect("validated above");
    let w = (((nodes / 2).saturating_sub(1) / 2) as i64).min(6);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let full = LaurentPolynomial::random(&mut rng, h.dim(), w, 24);
    // keep monomials holomorphic on U₁₂, each of unit size on the first torus
    let scale = |a: &[i64]| t1.radii().iter().zip(a).map(|(r, &k)| r.powi(k as i32)).product::<f64>();
    let p = LaurentPolynomial::from_terms(
        h.dim(),
        full.terms().filter(|(a, _)| u12.admits_monomial(a)).map(|(a, c)| (a.clone(), *c / scale(a))),
    );
    let s1 = TorusSamples::of_polynomial(&p, &t1, Exec::default());
    let s2 = TorusSamples::of_polynomial(&p, &t2, Exec::default());
    // errors in units of the largest term on the first torus
    let size = p.terms().map(|(a, c)| c.norm() * scale(a)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let err = s1
        .coefficients_in_window(w, Exec::default())
        .iter()
        .map(|(a, c)| (c - p.coefficient(a)).norm() * scale(a) / size)
        .fold(0.0, f64::max);
    v.push(
        "quadrature_recovery",
        err < tol.coefficient_rel,
        json!({ "terms": p.terms().count(), "window": w, "nodes": nodes, "max_scaled_error": err }),
    );
    let worst = p
        .terms()
        .map(|(a, _)| (s1.coefficient(a) - s2.coefficient(a)).norm() * scale(a) / size)
        .fold(0.0, f64::max);
    v.push(
        "coefficient_consistency",
        worst < tol.coefficient_rel,
        json!({ "torus_1": t1.radii(), "torus_2": t2.radii(), "max_scaled_discrepancy": worst }),
    );
}

fn pair_numeric_checks(label: &str, z0: &ReinhardtBoxDomain, z: &ReinhardtBoxDomain, v: &mut Verification) {
    if z0.dim() != 1 {
        return;
    }
    let tol = Tolerances::default();
    match (z0.factors()[0], z.factors()[0]) {
        (Factor1D::Annulus { inner, outer }, Factor1D::Disc { .. }) => {
            let rho = if outer == Radius::Infinite { 2.0 * inner.to_f64() } else { (inner.to_f64() * outer.to_f64()).sqrt() };
            let candidate = least_squares_inverse(rho, 20);
            let result = candidate
                .map_err(|e| e.to_string())
                .and_then(|p| obstruction_bound(1, rho, |z| p.eval(z), f64::INFINITY, &tol).map_err(|e| e.to_string()));
            match result {
                Ok(b) => {
                    let ok = (b.bound - 1.0 / rho).abs() < 1e-9 && b.sampled_sup >= 1.0 / rho - tol.sup && b.bound <= b.sampled_sup + 1e-9;
                    v.push(
                        format!("obstruction_{label}"),
                        ok,
                        json!({ "rho": rho, "k": 1, "bound": b.bound, "sampled_sup": b.sampled_sup }),
                    );
                }
                Err(e) => v.push(format!("obstruction_{label}"), false, json!({ "error": e })),
            }
        }
        (Factor1D::Disc { radius: r }, Factor1D::Disc { radius: s }) => {
            let (rho, s) = (r.to_f64(), s.to_f64());
            let ratio = rho / s;
            let top = ((1e-9f64).ln() / ratio.ln()).floor().clamp(2.0, 60.0) as usize;
            let degrees: Vec<usize> = (1..=top).collect();
            let target = |z: Complex64| (Complex64::new(s, 0.0) - z).inv();
            match density_decay(target, &geometric_taylor(s, top + 1), s, rho, &degrees, &tol) {
                Ok(fit) => {
                    let ok = (fit.fitted_ratio - ratio).abs() <= tol.ratio;
                    v.push(
                        format!("density_{label}"),
                        ok,
                        json!({ "rho": rho, "s": s, "fitted_ratio": fit.fitted_ratio, "predicted_ratio": ratio }),
                    );
                    v.decay.push((label.to_string(), fit));
                }
                Err(e) => v.push(format!("density_{label}"), false, json!({ "error": e.to_string() })),
            }
        }
        _ => {}
    }
}

fn envelope_checks(h: &HartogsFigure, v: &mut Verification) -> Result<(), EnvelopeError> {
    let region = log_image(h)?;
    let hull = log_convex_hull(&region)?;
    let cert = stein_certificate(h)?;
    let outside = !region.contains(&cert.witness_log);
    let inside = cert.hull.strictly_contains(cert.witness_log);
    let idempotent = hull.rehull()?.approx_eq(&hull, LOG_TOL);
    v.push(
        "stein_certificate",
        !cert.is_stein && outside && inside && idempotent,
        json!({ "witness_outside_image": outside, "witness_inside_hull": inside, "hull_idempotent": idempotent }),
    );
    Ok(())
}

/// Every cross-check that applies to `h`.
pub fn verify(h: &HartogsFigure, opts: &VerifyOptions) -> Result<Verification, CohomologyError> {
    let mut v = Verification::default();
    let h01 = cohomology(h, 0, 1)?;
    oracle_check(h, &h01.reduced.spectrum(), opts.window, &mut v);
    if let Ok(route) = formula_route_spectrum(h) {
        v.push("quotient_formula_route", route == h01.reduced.spectrum(), json!({ "spectrum": route }));
    }
    if h01.class == CohomClass::Mixed {
        let ind = h01.indiscrete_model.as_ref().expect("mixed classes carry an indiscrete part");
        let disjoint = h01.reduced.spectrum().is_disjoint_from(&ind.numerator.spectrum()).unwrap_or(false);
        v.push("mixed_parts_disjoint", disjoint, json!({}));
    }
    let swapped = cohomology(&h.swapped(), 0, 1)?;
    let perm = h.swapped().unswap_permutation();
    let symmetric = swapped.class == h01.class
        && swapped.reduced.permute(&perm).map(|m| m == h01.reduced).unwrap_or(false);
    v.push("swap_symmetry", symmetric, json!({}));
    quadrature_checks(h, opts, &mut v);
    pair_numeric_checks("x", h.x0(), h.x(), &mut v);
    pair_numeric_checks("y", h.y0(), h.y(), &mut v);
    if h.x().dim() == 1 && h.y().dim() == 1 {
        if let Err(e) = envelope_checks(h, &mut v) {
            v.push("stein_certificate", false, json!({ "error": e.to_string() }));
        }
    }
    Ok(v)
}

pub fn pair_classes(h: &HartogsFigure) -> Value {
    let x = classify_product_pair(h.x0(), h.x()).map(|c| to_value(&c)).unwrap_or_else(|e| json!({ "error": e.to_string() }));
    let y = classify_product_pair(h.y0(), h.y()).map(|c| to_value(&c)).unwrap_or_else(|e| json!({ "error": e.to_string() }));
    json!({ "x": x, "y": y })
}

pub fn envelope_value(h: &HartogsFigure) -> Value {
    match (log_image(h), stein_certificate(h)) {
        (Ok(region), Ok(cert)) => json!({ "log_image": to_value(&region), "certificate": to_value(&cert) }),
        (Err(e), _) | (_, Err(e)) => json!({ "unsupported": e.to_string() }),
    }
}

pub fn envelope_text(h: &HartogsFigure) -> Result<String, EnvelopeError> {
    let region = log_image(h)?;
    let cert = stein_certificate(h)?;
    let mut s = String::from("log image:\n");
    for b in &region.boxes {
        let axes: Vec<String> = b.axes.iter().map(|iv| format!("({:.6}, {:.6})", iv.lo, iv.hi)).collect();
        s += &format!("  {}\n", axes.join(" x "));
    }
    s += "log-convex hull:\n";
    for f in &cert.hull.facets {
        s += &format!("  {:.6}*x1 + {:.6}*x2 <= {:.6}\n", f.normal[0], f.normal[1], f.offset);
    }
    s += &format!("stein: {}\n", cert.is_stein);
    let pt: Vec<String> = cert.extension_point.iter().map(|r| r.to_string()).collect();
    s += &format!("extension point radii: ({})\n", pt.join(", "));
    match &cert.envelope {
        hartogs::envelope::EnvelopeShape::Box { domain } => s += &format!("envelope: {domain}\n"),
        hartogs::envelope::EnvelopeShape::LogConvex { bounding_box, .. } => {
            s += &format!("envelope: log-convex hull above, inside {bounding_box}\n")
        }
    }
    Ok(s)
}

pub fn verification_text(v: &Verification) -> String {
    let mut s = String::new();
    for c in &v.checks {
        s += &format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    s
}
