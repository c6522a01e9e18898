//! Elementary Reinhardt domains and their monomial spectra.
//!
//! Every domain here is a product of open one-variable factors, each a disc
//! `{|z| < R}` or an annulus `{r < |z| < R}` with `0 < r < R ≤ ∞`. Radii are
//! exact rationals so the pair classifier can branch on equalities.

use std::fmt;

use num_traits::{CheckedMul, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};
use thiserror::Error;

use crate::lattice::{Interval, LatticeBox, LatticeError, Spectrum};

pub type Rational = num_rational::Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(Rational),
    #[error("annulus needs inner < outer, got inner {inner} and outer {outer}")]
    AnnulusRadii { inner: Radius, outer: Radius },
    #[error("a domain needs at least one factor")]
    NoFactors,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
    #[error("{0} must be a proper subdomain")]
    NotProper(&'static str),
    #[error("natural domains are defined per box; got {0} boxes")]
    NotSingleBox(usize),
    #[error("exponent box {support} is not realizable on {domain}")]
    NotRealizable { support: String, domain: String },
    #[error("radius arithmetic overflowed")]
    Overflow,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A positive exact rational radius, or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radius {
    Finite(Rational),
    Infinite,
}

impl Radius {
    pub fn new(value: Rational) -> Result<Self, DomainError> {
        if value.is_positive() {
            Ok(Radius::Finite(value))
        } else {
            Err(DomainError::NonPositiveRadius(value))
        }
    }

    pub fn ratio(numer: i64, denom: i64) -> Result<Self, DomainError> {
        if denom == 0 {
            return Err(DomainError::NonPositiveRadius(Rational::zero()));
        }
        Radius::new(Rational::new(numer, denom))
    }

    pub fn one() -> Self {
        Radius::Finite(Rational::from_integer(1))
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Radius::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Radius::Infinite => f64::INFINITY,
        }
    }

    /// Natural log, computed from numerator and denominator separately.
    pub fn ln(self) -> f64 {
        match self {
            Radius::Finite(r) => (*r.numer() as f64).ln() - (*r.denom() as f64).ln(),
            Radius::Infinite => f64::INFINITY,
        }
    }

    pub fn scale(self, factor: Rational) -> Result<Self, DomainError> {
        match self {
            Radius::Finite(r) => Radius::new(r.checked_mul(&factor).ok_or(DomainError::Overflow)?),
            Radius::Infinite => Ok(Radius::Infinite),
        }
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Finite(r) => write!(f, "{r}"),
            Radius::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One open factor of a Reinhardt box domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Factor1D {
    Disc { radius: Radius },
    Annulus { inner: Radius, outer: Radius },
}

impl Factor1D {
    pub fn disc(radius: Radius) -> Self {
        Factor1D::Disc { radius }
    }

    pub fn annulus(inner: Radius, outer: Radius) -> Result<Self, DomainError> {
        if inner >= outer {
            return Err(DomainError::AnnulusRadii { inner, outer });
        }
        Ok(Factor1D::Annulus { inner, outer })
    }

    pub fn outer(&self) -> Radius {
        match *self {
            Factor1D::Disc { radius } => radius,
            Factor1D::Annulus { outer, .. } => outer,
        }
    }

    /// Inner radius, `None` for a disc.
    pub fn inner(&self) -> Option<Radius> {
        match *self {
            Factor1D::Disc { .. } => None,
            Factor1D::Annulus { inner, .. } => Some(inner),
        }
    }

    pub fn contains_origin(&self) -> bool {
        matches!(self, Factor1D::Disc { .. })
    }

    /// Containment of open sets.
    pub fn is_subset_of(&self, other: &Factor1D) -> bool {
        match (*self, *other) {
            (Factor1D::Disc { radius: r }, Factor1D::Disc { radius: big }) => r <= big,
            (Factor1D::Annulus { outer, .. }, Factor1D::Disc { radius }) => outer <= radius,
            (Factor1D::Annulus { inner, outer }, Factor1D::Annulus { inner: i2, outer: o2 }) => {
                i2 <= inner && outer <= o2
            }
            (Factor1D::Disc { .. }, Factor1D::Annulus { .. }) => false,
        }
    }

    /// Exponents `k` with `z^k` holomorphic on the factor.
    pub fn exponent_range(&self) -> Interval {
        if self.contains_origin() {
            Interval::at_least(0)
        } else {
            Interval::all()
        }
    }

    pub fn admits_exponent(&self, k: i64) -> bool {
        k >= 0 || !self.contains_origin()
    }

    /// Open radius interval containment: does `{|z| = rho}` lie in the factor?
    pub fn contains_radius(&self, rho: Rational) -> bool {
        let rho = Radius::Finite(rho);
        match *self {
            Factor1D::Disc { radius } => rho < radius,
            Factor1D::Annulus { inner, outer } => inner < rho && rho < outer,
        }
    }

    pub fn scale(&self, factor: Rational) -> Result<Self, DomainError> {
        match *self {
            Factor1D::Disc { radius } => Ok(Factor1D::disc(radius.scale(factor)?)),
            Factor1D::Annulus { inner, outer } => Factor1D::annulus(inner.scale(factor)?, outer.scale(factor)?),
        }
    }
}

impl fmt::Display for Factor1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor1D::Disc { radius } => write!(f, "disc({radius})"),
            Factor1D::Annulus { inner, outer } => write!(f, "annulus({inner},{outer})"),
        }
    }
}

impl Serialize for Factor1D {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Factor1D::Disc { radius } => {
                let mut st = s.serialize_struct("Factor1D", 2)?;
                st.serialize_field("kind", "disc")?;
                st.serialize_field("radius", radius)?;
                st.end()
            }
            Factor1D::Annulus { inner, outer } => {
                let mut st = s.serialize_struct("Factor1D", 3)?;
                st.serialize_field("inner", inner)?;
                st.serialize_field("kind", "annulus")?;
                st.serialize_field("outer", outer)?;
                st.end()
            }
        }
    }
}

/// A product `F₁ × … × Fₙ` of one-variable factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReinhardtBoxDomain {
    factors: Vec<Factor1D>,
}

impl ReinhardtBoxDomain {
    pub fn new(factors: Vec<Factor1D>) -> Result<Self, DomainError> {
        if factors.is_empty() {
            return Err(DomainError::NoFactors);
        }
        Ok(ReinhardtBoxDomain { factors })
    }

    pub fn single(factor: Factor1D) -> Self {
        ReinhardtBoxDomain { factors: vec![factor] }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor1D] {
        &self.factors
    }

    pub fn product(&self, other: &ReinhardtBoxDomain) -> ReinhardtBoxDomain {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        ReinhardtBoxDomain { factors }
    }

    pub fn permute(&self, perm: &[usize]) -> ReinhardtBoxDomain {
        ReinhardtBoxDomain { factors: perm.iter().map(|&j| self.factors[j]).collect() }
    }

    pub fn scale(&self, factor: Rational) -> Result<Self, DomainError> {
        let factors = self.factors.iter().map(|f| f.scale(factor)).collect::<Result<_, _>>()?;
        Ok(ReinhardtBoxDomain { factors })
    }

    /// Factorwise containment `self ⊆ outer`.
    pub fn is_subset_of(&self, outer: &ReinhardtBoxDomain) -> Result<bool, DomainError> {
        check_dims(self.dim(), outer.dim())?;
        Ok(self.factors.iter().zip(&outer.factors).all(|(a, b)| a.is_subset_of(b)))
    }

    /// The monomial spectrum `{α : z^α ∈ O(self)}`.
    pub fn spectrum(&self) -> Spectrum {
        let axes = self.factors.iter().map(Factor1D::exponent_range).collect();
        Spectrum::single(LatticeBox::new(axes).expect("domains have at least one factor"))
    }

    /// Direct membership test for `z^α ∈ O(self)`, without building a spectrum.
    pub fn admits_monomial(&self, alpha: &[i64]) -> bool {
        alpha.len() == self.dim() && self.factors.iter().zip(alpha).all(|(f, &k)| f.admits_exponent(k))
    }

    /// Can every monomial with exponents in `support` live on this domain?
    pub fn realizes(&self, support: &LatticeBox) -> bool {
        support.dim() == self.dim()
            && self
                .factors
                .iter()
                .zip(support.axes())
                .all(|(f, iv)| !f.contains_origin() || iv.lo() >= crate::lattice::ExtInt::Fin(0))
    }
}

fn check_dims(left: usize, right: usize) -> Result<(), DomainError> {
    if left == right {
        Ok(())
    } else {
        Err(DomainError::DimensionMismatch { left, right })
    }
}

/// `inner ⊆ outer`, factorwise.
pub fn contains(inner: &ReinhardtBoxDomain, outer: &ReinhardtBoxDomain) -> Result<bool, DomainError> {
    inner.is_subset_of(outer)
}

/// The monomial spectrum of a domain.
pub fn spectrum_of(d: &ReinhardtBoxDomain) -> Spectrum {
    d.spectrum()
}

impl fmt::Display for ReinhardtBoxDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl Serialize for ReinhardtBoxDomain {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.factors.serialize(s)
    }
}

/// `(X × Y₀) ∪ (X₀ × Y)` with `X₀ ⊊ X` and `Y₀ ⊊ Y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct HartogsFigure {
    x: ReinhardtBoxDomain,
    x0: ReinhardtBoxDomain,
    y: ReinhardtBoxDomain,
    y0: ReinhardtBoxDomain,
}

/// The two-piece cover `U₁ = X₀ × Y`, `U₂ = X × Y₀` and its overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HartogsCover {
    pub u1: ReinhardtBoxDomain,
    pub u2: ReinhardtBoxDomain,
    pub u12: ReinhardtBoxDomain,
}

impl HartogsFigure {
    pub fn new(
        x: ReinhardtBoxDomain,
        x0: ReinhardtBoxDomain,
        y: ReinhardtBoxDomain,
        y0: ReinhardtBoxDomain,
    ) -> Result<Self, DomainError> {
        check_proper(&x0, &x, "X0")?;
        check_proper(&y0, &y, "Y0")?;
        Ok(HartogsFigure { x, x0, y, y0 })
    }

    pub fn x(&self) -> &ReinhardtBoxDomain {
        &self.x
    }

    pub fn x0(&self) -> &ReinhardtBoxDomain {
        &self.x0
    }

    pub fn y(&self) -> &ReinhardtBoxDomain {
        &self.y
    }

    pub fn y0(&self) -> &ReinhardtBoxDomain {
        &self.y0
    }

    pub fn dim(&self) -> usize {
        self.x.dim() + self.y.dim()
    }

    pub fn cover(&self) -> HartogsCover {
        HartogsCover {
            u1: self.x0.product(&self.y),
            u2: self.x.product(&self.y0),
            u12: self.x0.product(&self.y0),
        }
    }

    /// The same figure with the roles of the two pairs exchanged.
    pub fn swapped(&self) -> HartogsFigure {
        HartogsFigure { x: self.y.clone(), x0: self.y0.clone(), y: self.x.clone(), y0: self.x0.clone() }
    }

    /// Coordinate permutation taking the swapped figure's axes back to ours.
    pub fn unswap_permutation(&self) -> Vec<usize> {
        let (m, n) = (self.x.dim(), self.y.dim());
        // swapped axes are [Y coords | X coords]; our axis i < m is swapped axis n + i
        (0..m).map(|i| n + i).chain(0..n).collect()
    }

    pub fn scale(&self, factor: Rational) -> Result<Self, DomainError> {
        HartogsFigure::new(self.x.scale(factor)?, self.x0.scale(factor)?, self.y.scale(factor)?, self.y0.scale(factor)?)
    }
}

fn check_proper(inner: &ReinhardtBoxDomain, outer: &ReinhardtBoxDomain, name: &'static str) -> Result<(), DomainError> {
    if !inner.is_subset_of(outer)? {
        return Err(DomainError::NotContained { inner: inner.to_string(), outer: outer.to_string() });
    }
    if inner == outer {
        return Err(DomainError::NotProper(name));
    }
    Ok(())
}

pub fn hartogs_cover(h: &HartogsFigure) -> HartogsCover {
    h.cover()
}

/// Largest box domain on which every series supported in `support` and
/// convergent on `base` still converges.
///
/// Per axis: only nonnegative powers fill in the hole (a disc of the base's
/// outer radius); only negative powers push the outer radius to infinity;
/// mixed powers keep the base factor.
pub fn natural_domain_of_box(support: &LatticeBox, base: &ReinhardtBoxDomain) -> Result<ReinhardtBoxDomain, DomainError> {
    check_dims(support.dim(), base.dim())?;
    if !base.realizes(support) {
        return Err(DomainError::NotRealizable { support: support.to_string(), domain: base.to_string() });
    }
    let factors = support
        .axes()
        .iter()
        .zip(base.factors())
        .map(|(iv, f)| {
            use crate::lattice::ExtInt;
            if iv.lo() >= ExtInt::Fin(0) {
                Ok(Factor1D::disc(f.outer()))
            } else if iv.hi() <= ExtInt::Fin(-1) {
                // realizable negative powers imply an annulus factor
                let inner = f.inner().expect("negative powers need an annulus");
                Factor1D::annulus(inner, Radius::Infinite)
            } else {
                Ok(*f)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    ReinhardtBoxDomain::new(factors)
}

pub fn natural_domain(s: &Spectrum, base: &ReinhardtBoxDomain) -> Result<ReinhardtBoxDomain, DomainError> {
    let c = s.canonicalize();
    match c.boxes() {
        [b] => natural_domain_of_box(b, base),
        other => Err(DomainError::NotSingleBox(other.len())),
    }
}

/// One summand of a Laurent model: series supported on a box, convergent on a domain.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LaurentSummand {
    pub support: LatticeBox,
    pub convergence: ReinhardtBoxDomain,
}

/// A space of Laurent series: a direct sum of box-supported summands, each
/// with its own convergence domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentModel {
    dim: usize,
    summands: Vec<LaurentSummand>,
}

impl LaurentModel {
    /// Series supported on `spectrum`, convergent on one common domain.
    pub fn new(spectrum: &Spectrum, convergence: &ReinhardtBoxDomain) -> Result<Self, DomainError> {
        check_dims(spectrum.dim(), convergence.dim())?;
        let c = spectrum.canonicalize();
        let mut summands = Vec::with_capacity(c.boxes().len());
        for b in c.boxes() {
            if !convergence.realizes(b) {
                return Err(DomainError::NotRealizable { support: b.to_string(), domain: convergence.to_string() });
            }
            summands.push(LaurentSummand { support: b.clone(), convergence: convergence.clone() });
        }
        Ok(LaurentModel { dim: spectrum.dim(), summands })
    }

    /// Each box of `spectrum` gets its natural domain relative to `base`.
    pub fn natural(spectrum: &Spectrum, base: &ReinhardtBoxDomain) -> Result<Self, DomainError> {
        check_dims(spectrum.dim(), base.dim())?;
        let summands = spectrum
            .canonicalize()
            .boxes()
            .iter()
            .map(|b| Ok(LaurentSummand { support: b.clone(), convergence: natural_domain_of_box(b, base)? }))
            .collect::<Result<Vec<_>, DomainError>>()?;
        Ok(LaurentModel { dim: spectrum.dim(), summands })
    }

    /// `O(d)` itself.
    pub fn of_domain(d: &ReinhardtBoxDomain) -> Self {
        LaurentModel::new(&d.spectrum(), d).expect("a domain realizes its own spectrum")
    }

    pub fn empty(dim: usize) -> Self {
        LaurentModel { dim, summands: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn summands(&self) -> &[LaurentSummand] {
        &self.summands
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::from_box_list(self.dim, self.summands.iter().map(|s| s.support.clone()).collect())
            .expect("summands share the model dimension")
    }

    /// The common convergence domain, if all summands agree.
    pub fn convergence(&self) -> Option<&ReinhardtBoxDomain> {
        let first = &self.summands.first()?.convergence;
        self.summands.iter().all(|s| &s.convergence == first).then_some(first)
    }

    /// Completed tensor product, realized on product supports and domains.
    pub fn tensor(&self, other: &LaurentModel) -> LaurentModel {
        let mut summands: Vec<LaurentSummand> = self
            .summands
            .iter()
            .flat_map(|a| {
                other.summands.iter().map(move |b| LaurentSummand {
                    support: a.support.product(&b.support),
                    convergence: a.convergence.product(&b.convergence),
                })
            })
            .collect();
        summands.sort_by(|a, b| a.support.cmp(&b.support));
        LaurentModel { dim: self.dim + other.dim, summands }
    }

    pub fn permute(&self, perm: &[usize]) -> Result<LaurentModel, DomainError> {
        check_dims(perm.len(), self.dim)?;
        let mut summands = self
            .summands
            .iter()
            .map(|s| {
                let support = Spectrum::single(s.support.clone()).permute(perm)?;
                let support = support.boxes()[0].clone();
                Ok(LaurentSummand { support, convergence: s.convergence.permute(perm) })
            })
            .collect::<Result<Vec<_>, DomainError>>()?;
        summands.sort_by(|a, b| a.support.cmp(&b.support));
        Ok(LaurentModel { dim: self.dim, summands })
    }
}

impl Serialize for LaurentModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LaurentModel", 3)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("spectrum", &self.spectrum())?;
        st.serialize_field("summands", &self.summands)?;
        st.end()
    }
}

impl fmt::Display for LaurentModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊕ ")?;
            }
            write!(f, "{} on {}", s.support, s.convergence)?;
        }
        Ok(())
    }
}
