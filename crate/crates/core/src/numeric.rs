//! Numerical checks on finite Laurent truncations.
//!
//! Coefficients come from equispaced trapezoid quadrature on tori, which is
//! exact (up to roundoff) for Laurent polynomials whose exponent spread per
//! axis stays below the node count. Nothing here claims to verify topology.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::par::Exec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("coordinate {axis} is zero but carries a negative exponent")]
    ForbiddenZero { axis: usize },
    #[error("point has dimension {found}, polynomial has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("torus needs positive radii and a power-of-two node count >= 4 (got {0})")]
    InvalidTorus(String),
    #[error("need 0 < rho < s, got rho = {rho}, s = {s}")]
    RadiusOrder { rho: f64, s: f64 },
    #[error("circle |z| = {rho} leaves the candidate's disc of radius {radius}")]
    OutsideCandidate { rho: f64, radius: f64 },
    #[error("least-squares fit failed: {0}")]
    Fit(String),
}

/// Tolerances used by the harness; every field can be overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub coefficient_rel: f64,
    pub sup: f64,
    pub sup_samples: usize,
    pub ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { coefficient_rel: 1e-10, sup: 1e-6, sup_samples: 4096, ratio: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl LaurentPolynomial {
    pub fn new(dim: usize) -> Self {
        LaurentPolynomial { dim, coeffs: BTreeMap::new() }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Vec<i64>, Complex64)>) -> Self {
        let mut p = LaurentPolynomial::new(dim);
        for (alpha, c) in terms {
            p.add_term(alpha, c);
        }
        p
    }

    pub fn add_term(&mut self, alpha: Vec<i64>, c: Complex64) {
        assert_eq!(alpha.len(), self.dim, "exponent dimension");
        let entry = self.coeffs.entry(alpha).or_default();
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.coeffs.retain(|_, v| *v != Complex64::new(0.0, 0.0));
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficient(&self, alpha: &[i64]) -> Complex64 {
        self.coeffs.get(alpha).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.coeffs.keys().flatten().map(|a| a.abs()).max().unwrap_or(0)
    }

    /// Sum of monomials in sorted exponent order.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64, NumericError> {
        if z.len() != self.dim {
            return Err(NumericError::DimensionMismatch { expected: self.dim, found: z.len() });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for (alpha, c) in &self.coeffs {
            let mut term = *c;
            for (axis, (&zi, &k)) in z.iter().zip(alpha).enumerate() {
                if k < 0 && zi == Complex64::new(0.0, 0.0) {
                    return Err(NumericError::ForbiddenZero { axis });
                }
                term *= zi.powi(k as i32);
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Up to `terms` distinct exponents in `[−w, w]^dim`, coefficients of modulus in `[1/2, 2]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, w: i64, terms: usize) -> Self {
        let terms = terms.min((2 * w as usize + 1).saturating_pow(dim as u32));
        let mut p = LaurentPolynomial::new(dim);
        while p.coeffs.len() < terms {
            let alpha: Vec<i64> = (0..dim).map(|_| rng.random_range(-w..=w)).collect();
            let c = Complex64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..2.0 * PI));
            p.coeffs.insert(alpha, c);
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusSpec {
    radii: Vec<f64>,
    nodes: usize,
}

impl TorusSpec {
    pub fn new(radii: Vec<f64>, nodes: usize) -> Result<Self, NumericError> {
        if radii.is_empty() || radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) || nodes < 4 || !nodes.is_power_of_two() {
            return Err(NumericError::InvalidTorus(format!("radii {radii:?}, nodes {nodes}")));
        }
        Ok(TorusSpec { radii, nodes })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn dim(&self) -> usize {
        self.radii.len()
    }

    fn len(&self) -> usize {
        self.nodes.pow(self.dim() as u32)
    }

    /// Per-axis node indices of grid point `idx` (last axis fastest).
    fn node_indices(&self, mut idx: usize, out: &mut [usize]) {
        for axis in (0..self.dim()).rev() {
            out[axis] = idx % self.nodes;
            idx /= self.nodes;
        }
    }
}

/// `e^{2πik/N}` for `k = 0..N`.
fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)).collect()
}

/// A function sampled once on a torus grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSamples {
    spec: TorusSpec,
    roots: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl TorusSamples {
    pub fn sample<F>(f: F, spec: &TorusSpec, exec: Exec) -> Self
    where
        F: Fn(&[Complex64]) -> Complex64 + Sync + Send,
    {
        let roots = roots_of_unity(spec.nodes);
        let values = exec.map_range(spec.len(), |idx| {
            let mut j = vec![0; spec.dim()];
            spec.node_indices(idx, &mut j);
            let z: Vec<Complex64> = j.iter().zip(&spec.radii).map(|(&k, &r)| roots[k] * r).collect();
            f(&z)
        });
        TorusSamples { spec: spec.clone(), roots, values }
    }

    pub fn of_polynomial(p: &LaurentPolynomial, spec: &TorusSpec, exec: Exec) -> Self {
        TorusSamples::sample(|z| p.eval(z).expect("torus points have no zero coordinate"), spec, exec)
    }

    pub fn spec(&self) -> &TorusSpec {
        &self.spec
    }

    /// Torus mean of `f · z^{−α}`.
    pub fn coefficient(&self, alpha: &[i64]) -> Complex64 {
        let n = self.spec.nodes;
        let dim = self.spec.dim();
        // odometer over the grid (last axis fastest) carrying the phase index
        let step: Vec<usize> = alpha.iter().map(|&a| (-a).rem_euclid(n as i64) as usize).collect();
        let mut j = vec![0usize; dim];
        let mut phase = 0usize;
        let mut sum = Complex64::new(0.0, 0.0);
        for v in &self.values {
            sum += v * self.roots[phase];
            for axis in (0..dim).rev() {
                j[axis] += 1;
                phase = (phase + step[axis]) % n;
                if j[axis] < n {
                    break;
                }
                j[axis] = 0;
            }
        }
        let scale: f64 = self.spec.radii.iter().zip(alpha).map(|(r, &a)| r.powi(-a as i32)).product();
        sum * scale / self.values.len() as f64
    }

    /// Coefficients for every exponent in `[−w, w]^dim`, in lexicographic order.
    pub fn coefficients_in_window(&self, w: i64, exec: Exec) -> Vec<(Vec<i64>, Complex64)> {
        let dim = self.spec.dim();
        let side = (2 * w + 1) as usize;
        let total = side.pow(dim as u32);
        exec.map_range(total, |mut idx| {
            let mut alpha = vec![0i64; dim];
            for axis in (0..dim).rev() {
                alpha[axis] = (idx % side) as i64 - w;
                idx /= side;
            }
            let c = self.coefficient(&alpha);
            (alpha, c)
        })
    }
}

pub fn torus_coefficient<F>(f: F, alpha: &[i64], spec: &TorusSpec) -> Complex64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync + Send,
{
    TorusSamples::sample(f, spec, Exec::default()).coefficient(alpha)
}

/// `|c₁ − c₂| / (1 + |c₁|)` for the `α` coefficient read off two tori.
pub fn coefficient_consistency<F>(f: F, alpha: &[i64], t1: &TorusSpec, t2: &TorusSpec) -> f64
where
    F: Fn(&[Complex64]) -> Complex64 + Sync + Send,
{
    let c1 = torus_coefficient(&f, alpha, t1);
    let c2 = torus_coefficient(&f, alpha, t2);
    (c1 - c2).norm() / (1.0 + c1.norm())
}

/// Largest relative coefficient error of `samples` against `p` on the window
/// `[−w, w]^dim`. Off-support errors are measured against the smallest
/// stored coefficient.
pub fn recovery_error(p: &LaurentPolynomial, samples: &TorusSamples, w: i64, exec: Exec) -> f64 {
    let floor = p.terms().map(|(_, c)| c.norm()).fold(f64::INFINITY, f64::min).min(1.0);
    samples
        .coefficients_in_window(w, exec)
        .into_iter()
        .map(|(alpha, c)| {
            let exact = p.coefficient(&alpha);
            (c - exact).norm() / exact.norm().max(floor)
        })
        .fold(0.0, f64::max)
}

fn circle(rho: f64, samples: usize) -> Vec<Complex64> {
    (0..samples).map(|k| Complex64::from_polar(rho, 2.0 * PI * k as f64 / samples as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// `(N, e_N)` for each requested degree.
    pub errors: Vec<(usize, f64)>,
    /// `exp` of the least-squares slope of `ln e_N` against `N`; 0 when every error vanishes.
    pub fitted_ratio: f64,
    pub predicted_ratio: f64,
}

/// Sup-norm errors on `|z| = ρ` of the Taylor partial sums of `target`,
/// holomorphic on `|z| < s`, and their fitted geometric rate.
///
/// Errors below `1e−11 · max(1, sup |target|)` sit at roundoff and are left
/// out of the fit.
pub fn density_decay<F>(
    target: F,
    taylor: &[Complex64],
    s: f64,
    rho: f64,
    degrees: &[usize],
    tol: &Tolerances,
) -> Result<DecayFit, NumericError>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(rho > 0.0 && rho < s) {
        return Err(NumericError::RadiusOrder { rho, s });
    }
    let top = degrees.iter().copied().max().unwrap_or(0);
    if top >= taylor.len() {
        return Err(NumericError::Fit(format!("degree {top} needs {} Taylor coefficients", top + 1)));
    }
    let mut errors: Vec<f64> = vec![0.0; degrees.len()];
    let mut scale: f64 = 1.0;
    for z in circle(rho, tol.sup_samples) {
        let value = target(z);
        scale = scale.max(value.norm());
        // Horner on each truncation keeps polynomial targets exact
        for (slot, &n) in errors.iter_mut().zip(degrees) {
            let partial = taylor[..=n].iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
            *slot = slot.max((value - partial).norm());
        }
    }
    let floor = 1e-11 * scale;
    let pts: Vec<(f64, f64)> =
        degrees.iter().zip(&errors).filter(|(_, &e)| e > floor).map(|(&n, &e)| (n as f64, e.ln())).collect();
    let fitted_ratio = match pts.len() {
        0 => 0.0,
        1 => return Err(NumericError::Fit("one resolvable degree is not enough for a rate".into())),
        m => {
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / m as f64;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / m as f64;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            (sxy / sxx).exp()
        }
    };
    Ok(DecayFit { errors: degrees.iter().copied().zip(errors).collect(), fitted_ratio, predicted_ratio: rho / s })
}

/// Taylor coefficients `s^{−k−1}` of `1/(s − z)`.
pub fn geometric_taylor(s: f64, count: usize) -> Vec<Complex64> {
    (0..count).map(|k| Complex64::new(s.powi(-(k as i32) - 1), 0.0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstructionBound {
    /// `|c₋ₖ(z^{−k} − candidate)| / ρ^k`, a lower bound on the sup distance.
    pub bound: f64,
    pub residue: Complex64,
    pub sampled_sup: f64,
}

/// Lower bound on `sup_{|z|=ρ} |z^{−k} − candidate|` from the `c₋ₖ`
/// functional, which every function holomorphic on the disc annihilates.
pub fn obstruction_bound<F>(
    k: u32,
    rho: f64,
    candidate: F,
    candidate_radius: f64,
    tol: &Tolerances,
) -> Result<ObstructionBound, NumericError>
where
    F: Fn(Complex64) -> Complex64,
{
    if !(rho > 0.0 && rho < candidate_radius) {
        return Err(NumericError::OutsideCandidate { rho, radius: candidate_radius });
    }
    let pts = circle(rho, tol.sup_samples);
    let mut residue = Complex64::new(0.0, 0.0);
    let mut sampled_sup: f64 = 0.0;
    for &z in &pts {
        let h = z.powi(-(k as i32)) - candidate(z);
        sampled_sup = sampled_sup.max(h.norm());
        residue += h * z.powi(k as i32);
    }
    residue /= pts.len() as f64;
    Ok(ObstructionBound { bound: residue.norm() / rho.powi(k as i32), residue, sampled_sup })
}

/// Polynomial `Σ a_j (z/ρ)^j` kept in the scaled basis for stable evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPolynomial {
    pub rho: f64,
    pub coeffs: Vec<Complex64>,
}

impl ScaledPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let u = z / self.rho;
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * u + a)
    }
}

/// Least-squares polynomial of the given degree fitting `1/z` on the upper
/// half of `|z| = ρ`. On the full circle the best fit would be zero; the arc
/// gives candidates that are good on half the circle.
pub fn least_squares_inverse(rho: f64, degree: usize) -> Result<ScaledPolynomial, NumericError> {
    let m = 4 * (degree + 1) + 64;
    let pts: Vec<Complex64> = (0..m).map(|j| Complex64::from_polar(rho, PI * (j as f64 + 0.5) / m as f64)).collect();
    let a = DMatrix::from_fn(m, degree + 1, |i, j| (pts[i] / rho).powi(j as i32));
    let b = DVector::from_iterator(m, pts.iter().map(|z| z.inv()));
    let svd = a.svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    let x = svd.solve(&b, cutoff).map_err(|e| NumericError::Fit(e.to_string()))?;
    Ok(ScaledPolynomial { rho, coeffs: x.iter().copied().collect() })
}
