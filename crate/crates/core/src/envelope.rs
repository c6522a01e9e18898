//! Logarithmic images, their convex hulls, and the envelope of a figure.
//!
//! Geometry runs in floating log coordinates with tolerance [`LOG_TOL`].
//! Domain logic stays exact: the extension point is a pair of rational
//! radii and its position outside the figure is decided by exact comparison.

use serde::Serialize;
use thiserror::Error;

use crate::domains::{Factor1D, HartogsFigure, Radius, ReinhardtBoxDomain};

pub const LOG_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("log geometry needs one-variable X and Y factors, got dimensions {0} and {1}")]
    UnsupportedDimension(usize, usize),
    #[error("log geometry needs bounded domains, {0} is unbounded")]
    Unbounded(String),
    #[error("hull needs a nonempty region of planar boxes")]
    UnsupportedShape,
    #[error("no boundary point of X0 x Y0 lies strictly inside the hull")]
    NoWitness,
}

/// Open interval `(lo, hi)` with `lo` possibly `-inf` and `hi` finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogInterval {
    pub lo: f64,
    pub hi: f64,
}

impl Serialize for LogInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        if self.lo == f64::NEG_INFINITY {
            t.serialize_element("-inf")?;
        } else {
            t.serialize_element(&self.lo)?;
        }
        t.serialize_element(&self.hi)?;
        t.end()
    }
}

impl LogInterval {
    fn of_factor(f: &Factor1D) -> Result<Self, EnvelopeError> {
        if f.outer() == Radius::Infinite {
            return Err(EnvelopeError::Unbounded(f.to_string()));
        }
        let lo = f.inner().map_or(f64::NEG_INFINITY, Radius::ln);
        Ok(LogInterval { lo, hi: f.outer().ln() })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBox {
    pub axes: Vec<LogInterval>,
}

impl LogBox {
    pub fn of_domain(d: &ReinhardtBoxDomain) -> Result<Self, EnvelopeError> {
        Ok(LogBox { axes: d.factors().iter().map(LogInterval::of_factor).collect::<Result<_, _>>()? })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.axes.iter().zip(x).all(|(iv, &t)| iv.contains(t))
    }
}

/// Finite union of log boxes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogRegion {
    pub boxes: Vec<LogBox>,
}

impl LogRegion {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes.iter().any(|b| b.contains(x))
    }
}

/// `log(X₀) × log(Y) ∪ log(X) × log(Y₀)`.
pub fn log_image(h: &HartogsFigure) -> Result<LogRegion, EnvelopeError> {
    if h.x().dim() != 1 || h.y().dim() != 1 {
        return Err(EnvelopeError::UnsupportedDimension(h.x().dim(), h.y().dim()));
    }
    let cover = h.cover();
    Ok(LogRegion { boxes: vec![LogBox::of_domain(&cover.u1)?, LogBox::of_domain(&cover.u2)?] })
}

/// Half-plane `normal · x ≤ offset` with a unit normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Facet {
    pub normal: [f64; 2],
    pub offset: f64,
}

/// Closed convex hull `conv(vertices) + cone(directions)` with its facets.
/// Membership in the open hull is strict inequality on every facet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogHull {
    pub facets: Vec<Facet>,
    pub vertices: Vec<[f64; 2]>,
    pub directions: Vec<[f64; 2]>,
}

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn unit(v: [f64; 2]) -> [f64; 2] {
    let n = v[0].hypot(v[1]);
    // adding 0.0 turns -0.0 into 0.0 so facet angles sort consistently
    [v[0] / n + 0.0, v[1] / n + 0.0]
}

fn close(a: [f64; 2], b: [f64; 2]) -> bool {
    (a[0] - b[0]).abs() <= LOG_TOL && (a[1] - b[1]).abs() <= LOG_TOL
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise vertices of the convex polygon spanned by `pts`.
fn convex_polygon(mut pts: Vec<[f64; 2]>) -> Vec<[f64; 2]> {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup_by(|a, b| close(*a, *b));
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= LOG_TOL {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= LOG_TOL {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl LogHull {
    /// `conv(points) + cone(directions)` in the plane.
    pub fn from_generators(points: &[[f64; 2]], directions: &[[f64; 2]]) -> Result<Self, EnvelopeError> {
        if points.is_empty() {
            return Err(EnvelopeError::UnsupportedShape);
        }
        let mut dirs: Vec<[f64; 2]> = directions.iter().map(|&d| unit(d)).collect();
        dirs.sort_by(|a, b| a.partial_cmp(b).expect("finite directions"));
        dirs.dedup_by(|a, b| close(*a, *b));

        let poly = convex_polygon(points.to_vec());
        let mut candidates = Vec::new();
        if poly.len() >= 2 {
            for i in 0..poly.len() {
                let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                let n = unit([b[1] - a[1], a[0] - b[0]]);
                candidates.push(n);
                if poly.len() == 2 {
                    candidates.push([-n[0], -n[1]]);
                }
            }
        }
        for d in &dirs {
            candidates.push([-d[1], d[0]]);
            candidates.push([d[1], -d[0]]);
        }
        if dirs.is_empty() && poly.len() == 1 {
            return Err(EnvelopeError::UnsupportedShape);
        }

        let mut facets: Vec<Facet> = Vec::new();
        for n in candidates.into_iter().map(unit) {
            if dirs.iter().any(|&d| dot(n, d) > LOG_TOL) {
                continue;
            }
            let offset = poly.iter().map(|&v| dot(n, v)).fold(f64::NEG_INFINITY, f64::max);
            let touching = poly.iter().filter(|&&v| dot(n, v) >= offset - LOG_TOL).count();
            let along_ray = dirs.iter().any(|&d| dot(n, d).abs() <= LOG_TOL);
            if touching >= 2 || (touching >= 1 && along_ray) {
                let f = Facet { normal: n, offset };
                if !facets.iter().any(|g| close(g.normal, f.normal)) {
                    facets.push(f);
                }
            }
        }
        facets.sort_by(|a, b| {
            let ta = a.normal[1].atan2(a.normal[0]);
            let tb = b.normal[1].atan2(b.normal[0]);
            ta.partial_cmp(&tb).expect("finite angles")
        });

        let mut vertices: Vec<[f64; 2]> = poly
            .iter()
            .copied()
            .filter(|&v| facets.iter().filter(|f| (dot(f.normal, v) - f.offset).abs() <= LOG_TOL).count() >= 2)
            .collect();
        vertices.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        Ok(LogHull { facets, vertices, directions: dirs })
    }

    /// `min_f (offset − normal · x)`: positive inside, negative outside.
    pub fn margin(&self, x: [f64; 2]) -> f64 {
        self.facets.iter().map(|f| f.offset - dot(f.normal, x)).fold(f64::INFINITY, f64::min)
    }

    /// Membership in the closed hull, up to [`LOG_TOL`].
    pub fn contains(&self, x: [f64; 2]) -> bool {
        self.margin(x) > -LOG_TOL
    }

    /// Membership in the open hull with margin at least [`LOG_TOL`].
    pub fn strictly_contains(&self, x: [f64; 2]) -> bool {
        self.margin(x) > LOG_TOL
    }

    /// Every facet is an axis half-plane.
    pub fn is_box(&self) -> bool {
        self.facets.iter().all(|f| f.normal[0].abs() <= LOG_TOL || f.normal[1].abs() <= LOG_TOL)
    }

    pub fn approx_eq(&self, other: &LogHull, tol: f64) -> bool {
        self.facets.len() == other.facets.len()
            && self.facets.iter().zip(&other.facets).all(|(a, b)| {
                (a.normal[0] - b.normal[0]).abs() <= tol
                    && (a.normal[1] - b.normal[1]).abs() <= tol
                    && (a.offset - b.offset).abs() <= tol
            })
    }

    /// Hull of this hull's own generators.
    pub fn rehull(&self) -> Result<LogHull, EnvelopeError> {
        LogHull::from_generators(&self.vertices, &self.directions)
    }
}

/// Closure of each box as finite corners plus `−e_i` for every `−∞` end.
fn generators(r: &LogRegion) -> (Vec<[f64; 2]>, Vec<[f64; 2]>) {
    let mut points = Vec::new();
    let mut dirs = Vec::new();
    for b in &r.boxes {
        let ends: Vec<Vec<f64>> = b
            .axes
            .iter()
            .map(|iv| if iv.lo == f64::NEG_INFINITY { vec![iv.hi] } else { vec![iv.lo, iv.hi] })
            .collect();
        for &x in &ends[0] {
            for &y in &ends[1] {
                points.push([x, y]);
            }
        }
        for (i, iv) in b.axes.iter().enumerate() {
            if iv.lo == f64::NEG_INFINITY {
                let mut d = [0.0, 0.0];
                d[i] = -1.0;
                dirs.push(d);
            }
        }
    }
    (points, dirs)
}

pub fn log_convex_hull(r: &LogRegion) -> Result<LogHull, EnvelopeError> {
    if r.boxes.is_empty() || r.boxes.iter().any(|b| b.dim() != 2 || b.axes.iter().any(|iv| !iv.hi.is_finite())) {
        return Err(EnvelopeError::UnsupportedShape);
    }
    let (points, dirs) = generators(r);
    LogHull::from_generators(&points, &dirs)
}

/// The envelope of holomorphy: a box domain when the hull is a box, else the
/// hull's constraints together with the smallest box domain around them.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeShape {
    Box { domain: ReinhardtBoxDomain },
    LogConvex { constraints: Vec<Facet>, bounding_box: ReinhardtBoxDomain },
}

impl EnvelopeShape {
    pub fn bounding_box(&self) -> &ReinhardtBoxDomain {
        match self {
            EnvelopeShape::Box { domain } => domain,
            EnvelopeShape::LogConvex { bounding_box, .. } => bounding_box,
        }
    }

    pub fn is_box(&self) -> bool {
        matches!(self, EnvelopeShape::Box { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinCertificate {
    pub is_stein: bool,
    /// Radii `(|z₁|, |z₂|)` on `∂X₀ × ∂Y₀` where every function on ℍ extends.
    pub extension_point: Vec<Radius>,
    pub witness_log: [f64; 2],
    pub hull: LogHull,
    pub envelope: EnvelopeShape,
}

/// Boundary circles of `z0` inside `z`, outermost first.
fn boundary_candidates(z0: &Factor1D, z: &Factor1D) -> Vec<Radius> {
    let mut circles = vec![z0.outer()];
    circles.extend(z0.inner());
    circles.into_iter().filter(|c| c.finite().is_some_and(|r| z.contains_radius(r))).collect()
}

fn in_figure(h: &HartogsFigure, c: [Radius; 2]) -> bool {
    let (Some(a), Some(b)) = (c[0].finite(), c[1].finite()) else { return false };
    let has = |d: &ReinhardtBoxDomain, r| d.factors()[0].contains_radius(r);
    (has(h.x0(), a) && has(h.y(), b)) || (has(h.x(), a) && has(h.y0(), b))
}

pub fn envelope(h: &HartogsFigure) -> Result<EnvelopeShape, EnvelopeError> {
    let hull = log_convex_hull(&log_image(h)?)?;
    Ok(envelope_of(h, &hull))
}

fn envelope_of(h: &HartogsFigure, hull: &LogHull) -> EnvelopeShape {
    let bounding_box = h.x().product(h.y());
    if hull.is_box() {
        EnvelopeShape::Box { domain: bounding_box }
    } else {
        EnvelopeShape::LogConvex { constraints: hull.facets.clone(), bounding_box }
    }
}

pub fn stein_certificate(h: &HartogsFigure) -> Result<SteinCertificate, EnvelopeError> {
    let hull = log_convex_hull(&log_image(h)?)?;
    let xs = boundary_candidates(&h.x0().factors()[0], &h.x().factors()[0]);
    let ys = boundary_candidates(&h.y0().factors()[0], &h.y().factors()[0]);
    for &a in &xs {
        for &b in &ys {
            let log = [a.ln(), b.ln()];
            if !in_figure(h, [a, b]) && hull.strictly_contains(log) {
                return Ok(SteinCertificate {
                    is_stein: false,
                    extension_point: vec![a, b],
                    witness_log: log,
                    envelope: envelope_of(h, &hull),
                    hull,
                });
            }
        }
    }
    Err(EnvelopeError::NoWitness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Rational;
    use crate::sample;
    use rand::{Rng, SeedableRng};

    fn half() -> Rational {
        Rational::new(1, 2)
    }

    fn ln_half() -> f64 {
        0.5f64.ln()
    }

    fn iv(lo: f64, hi: f64) -> LogInterval {
        LogInterval { lo, hi }
    }

    const NINF: f64 = f64::NEG_INFINITY;

    fn quadrant() -> LogHull {
        LogHull {
            facets: vec![
                Facet { normal: [1.0, 0.0], offset: 0.0 },
                Facet { normal: [0.0, 1.0], offset: 0.0 },
            ],
            vertices: vec![[0.0, 0.0]],
            directions: vec![[-1.0, 0.0], [0.0, -1.0]],
        }
    }

    fn assert_boxes(r: &LogRegion, expected: [[(f64, f64); 2]; 2]) {
        for (b, e) in r.boxes.iter().zip(expected) {
            for (a, (lo, hi)) in b.axes.iter().zip(e) {
                assert!(a.lo == lo || (a.lo - lo).abs() < 1e-15, "{a:?} vs {lo}");
                assert!((a.hi - hi).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn log_image_examples() {
        let l = ln_half();
        assert_boxes(&log_image(&sample::h1(half(), half())).unwrap(), [[(l, 0.0), (NINF, 0.0)], [(NINF, 0.0), (NINF, l)]]);
        assert_boxes(&log_image(&sample::h0(half(), half())).unwrap(), [[(NINF, l), (NINF, 0.0)], [(NINF, 0.0), (NINF, l)]]);
        assert_boxes(&log_image(&sample::h2(half(), half())).unwrap(), [[(l, 0.0), (NINF, 0.0)], [(NINF, 0.0), (l, 0.0)]]);
    }

    #[test]
    fn quadrant_hulls() {
        for h in [sample::h1(half(), half()), sample::h2(half(), half()), sample::h3(half(), half(), Rational::new(3, 4))] {
            let hull = log_convex_hull(&log_image(&h).unwrap()).unwrap();
            assert!(hull.approx_eq(&quadrant(), 1e-9), "{hull:?}");
            assert!(hull.is_box());
        }
    }

    #[test]
    fn both_runge_hull_is_cut_by_the_corner_line() {
        let hull = log_convex_hull(&log_image(&sample::h0(half(), half())).unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expected = LogHull {
            facets: vec![
                Facet { normal: [1.0, 0.0], offset: 0.0 },
                Facet { normal: [s, s], offset: s * ln_half() },
                Facet { normal: [0.0, 1.0], offset: 0.0 },
            ],
            vertices: vec![],
            directions: vec![],
        };
        assert!(hull.approx_eq(&expected, 1e-9), "{hull:?}");
        assert!(!hull.is_box());
        assert!(hull.strictly_contains([-0.4, -0.4]));
        assert!(!hull.contains([-0.3, -0.3]));
    }

    #[test]
    fn box_hull_is_the_box() {
        let cases = [
            vec![iv(-2.0, -1.0), iv(-3.0, 0.0)],
            vec![iv(NINF, -1.0), iv(-3.0, 0.0)],
            vec![iv(NINF, -1.0), iv(NINF, -0.5)],
        ];
        for axes in cases {
            let b = LogBox { axes: axes.clone() };
            let hull = log_convex_hull(&LogRegion { boxes: vec![b] }).unwrap();
            assert!(hull.is_box());
            let finite_lo = axes.iter().filter(|a| a.lo.is_finite()).count();
            assert_eq!(hull.facets.len(), 2 + finite_lo);
            for f in &hull.facets {
                let i = if f.normal[0].abs() > 0.5 { 0 } else { 1 };
                let bound = if f.normal[i] > 0.0 { axes[i].hi } else { -axes[i].lo };
                assert!((f.offset - bound).abs() < 1e-12);
            }
        }
    }

    /// `t·v` with a zero weight dropping the term, even at `v = −∞`.
    fn part(t: f64, v: f64) -> f64 {
        if t == 0.0 {
            0.0
        } else {
            t * v
        }
    }

    /// Is `x = t·p + (1−t)·q` for some `p ∈ a`, `q ∈ b`, `t` on a grid?
    fn t_scan(a: &LogBox, b: &LogBox, x: [f64; 2], steps: usize) -> bool {
        (0..=steps).any(|k| {
            let t = k as f64 / steps as f64;
            (0..2).all(|i| {
                let (ai, bi) = (a.axes[i], b.axes[i]);
                let lo = part(t, ai.lo) + part(1.0 - t, bi.lo);
                let hi = part(t, ai.hi) + part(1.0 - t, bi.hi);
                lo < x[i] && x[i] < hi
            })
        })
    }

    fn oracle_agrees(h: &HartogsFigure) {
        let region = log_image(h).unwrap();
        let hull = log_convex_hull(&region).unwrap();
        let (a, b) = (&region.boxes[0], &region.boxes[1]);
        let n = 60;
        for i in 0..n {
            for j in 0..n {
                let x = [-10.0 * i as f64 / n as f64 - 0.013, -10.0 * j as f64 / n as f64 - 0.017];
                if hull.margin(x).abs() < 1e-2 {
                    continue;
                }
                assert_eq!(hull.strictly_contains(x), t_scan(a, b, x, 4000), "{x:?} in hull of {h:?}");
            }
        }
    }

    #[test]
    fn hull_matches_convex_combination_oracle() {
        oracle_agrees(&sample::h0(half(), half()));
        oracle_agrees(&sample::h0(Rational::new(1, 5), Rational::new(2, 3)));
        oracle_agrees(&sample::h1(half(), half()));
        oracle_agrees(&sample::h2(half(), half()));
        oracle_agrees(&sample::h3(half(), half(), Rational::new(3, 4)));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..12 {
            oracle_agrees(&sample::random_supported_figure(&mut rng));
        }
    }

    #[test]
    fn hull_is_idempotent() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let h = sample::random_supported_figure(&mut rng);
            let hull = log_convex_hull(&log_image(&h).unwrap()).unwrap();
            assert!(hull.rehull().unwrap().approx_eq(&hull, 1e-12), "{h:?}");
        }
    }

    #[test]
    fn log_image_samples_lie_in_the_hull() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let h = sample::random_supported_figure(&mut rng);
            let region = log_image(&h).unwrap();
            let hull = log_convex_hull(&region).unwrap();
            for b in &region.boxes {
                for _ in 0..40 {
                    let x: Vec<f64> = b
                        .axes
                        .iter()
                        .map(|iv| {
                            let lo = if iv.lo.is_finite() { iv.lo } else { iv.hi - 20.0 };
                            rng.random_range(lo..iv.hi)
                        })
                        .collect();
                    assert!(hull.contains([x[0], x[1]]));
                }
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let c = stein_certificate(&sample::h1(half(), half())).unwrap();
        assert!(!c.is_stein);
        assert_eq!(c.extension_point, vec![Radius::new(half()).unwrap(); 2]);
        assert_eq!(c.envelope, EnvelopeShape::Box { domain: sample::h1(half(), half()).x().product(sample::h1(half(), half()).y()) });

        let c = stein_certificate(&sample::h0(half(), half())).unwrap();
        assert_eq!(c.extension_point, vec![Radius::new(half()).unwrap(); 2]);
        assert!(!c.envelope.is_box());

        let c = stein_certificate(&sample::h3(half(), half(), Rational::new(3, 4))).unwrap();
        assert_eq!(c.extension_point, vec![Radius::ratio(1, 2).unwrap(), Radius::ratio(3, 4).unwrap()]);
        assert!(c.envelope.is_box());
    }

    #[test]
    fn certificates_for_random_figures() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let h = sample::random_supported_figure(&mut rng);
            let c = stein_certificate(&h).unwrap();
            let region = log_image(&h).unwrap();
            assert!(!c.is_stein);
            assert!(!region.contains(&c.witness_log));
            assert!(c.hull.strictly_contains(c.witness_log));
        }
    }

    #[test]
    fn log_intervals_use_the_sentinel() {
        let v = serde_json::to_value(iv(NINF, -0.5)).unwrap();
        assert_eq!(v, serde_json::json!(["-inf", -0.5]));
    }

    #[test]
    fn log_geometry_rejects_higher_dimension() {
        let d = Factor1D::disc(Radius::one());
        let a = Factor1D::annulus(Radius::new(half()).unwrap(), Radius::one()).unwrap();
        let dd = ReinhardtBoxDomain::new(vec![d, d]).unwrap();
        let ad = ReinhardtBoxDomain::new(vec![a, d]).unwrap();
        let h = HartogsFigure::new(dd, ad, ReinhardtBoxDomain::single(d), ReinhardtBoxDomain::single(a)).unwrap();
        assert_eq!(log_image(&h), Err(EnvelopeError::UnsupportedDimension(2, 1)));
    }
}
