//! `H^{p,q}` of a generalized Hartogs figure through its two-piece Leray cover.
//!
//! With `U₁ = X₀ × Y`, `U₂ = X × Y₀` every `H^{p,q}` with `q ≥ 2` vanishes and
//! `H^{0,1} = O(U₁₂) / (O(U₁)| + O(U₂)|)`. The decision engine reads the
//! answer off the classes of the two Stein pairs; [`graded_reduced_spectrum`]
//! recomputes the graded shadow of that quotient monomial by monomial.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::domains::{DomainError, HartogsFigure, LaurentModel};
use crate::lattice::{LatticeError, Spectrum};
use crate::pairs::{classify_product_pair, PairClass, PairError, PairTag};
use crate::par::Exec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("q must be nonnegative, got {0}")]
    NegativeQ(i64),
    #[error("p must lie in 0..={dim}, got {p}")]
    POutOfRange { p: i64, dim: usize },
    #[error("pair ({which}0, {which}) is unsupported: {reason}")]
    Unsupported { which: &'static str, reason: String },
    #[error("no rule covers a {0} pair against a {1} pair")]
    NoApplicableRule(PairTag, PairTag),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CohomClass {
    Zero,
    Indiscrete,
    Hausdorff,
    Mixed,
}

impl fmt::Display for CohomClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CohomClass::Zero => "Zero",
            CohomClass::Indiscrete => "Indiscrete",
            CohomClass::Hausdorff => "Hausdorff",
            CohomClass::Mixed => "Mixed",
        })
    }
}

/// Dimension of a cohomology group: it is never finite and nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Zero,
    Uncountable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    Vanish,
    Degree0,
    Swap,
    SplitRunge,
    SplitSplit,
    SplitQuasiSplit,
    RungeAny,
    Multiplicity,
}

impl RuleId {
    pub fn id(self) -> &'static str {
        match self {
            RuleId::Vanish => "R-VANISH",
            RuleId::Degree0 => "R-H0",
            RuleId::Swap => "R-SWAP",
            RuleId::SplitRunge => "R-SPLIT-RUNGE",
            RuleId::SplitSplit => "R-SPLIT-SPLIT",
            RuleId::SplitQuasiSplit => "R-SPLIT-QSPLIT",
            RuleId::RungeAny => "R-RUNGE-ANY",
            RuleId::Multiplicity => "R-MULTIPLICITY",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            RuleId::Vanish => "two Stein pieces: Čech complex has length two",
            RuleId::Degree0 => "holomorphic functions extend to the envelope",
            RuleId::Swap => "Hartogs figures are symmetric in the two pairs",
            RuleId::SplitRunge => "split ⊗ Runge: dense proper subspace",
            RuleId::SplitSplit => "split ⊗ split: Hausdorff and infinite-dimensional",
            RuleId::SplitQuasiSplit => "split ⊗ quasi-split: non-Hausdorff, not indiscrete",
            RuleId::RungeAny => "Runge pair: restrictions dense, quotient indiscrete",
            RuleId::Multiplicity => "Ω^p is free of rank C(N,p) on a planar product",
        }
    }
}

impl Serialize for RuleId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrailEntry {
    pub rule: RuleId,
    pub anchor: &'static str,
    pub statement: String,
}

impl TrailEntry {
    fn new(rule: RuleId, statement: impl Into<String>) -> Self {
        TrailEntry { rule, anchor: rule.anchor(), statement: statement.into() }
    }
}

/// Dense-quotient presentation `numerator / closure-of-denominator` of an
/// indiscrete part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndiscreteModel {
    pub numerator: LaurentModel,
    pub denominator: LaurentModel,
}

impl IndiscreteModel {
    fn permute(&self, perm: &[usize]) -> Result<Self, DomainError> {
        Ok(IndiscreteModel { numerator: self.numerator.permute(perm)?, denominator: self.denominator.permute(perm)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub bidegree: (usize, usize),
    pub class: CohomClass,
    pub cardinality: Cardinality,
    pub multiplicity: u64,
    pub reduced: LaurentModel,
    pub indiscrete_model: Option<IndiscreteModel>,
    pub justification: Vec<TrailEntry>,
}

impl CohomologyReport {
    /// The rule that decided the class (the last non-bookkeeping entry).
    pub fn deciding_rule(&self) -> Option<RuleId> {
        self.justification.iter().rev().map(|e| e.rule).find(|r| !matches!(r, RuleId::Swap | RuleId::Multiplicity))
    }
}

/// `(rule id, anchor, statement)` triples in firing order.
pub fn justification_trail(report: &CohomologyReport) -> Vec<(&'static str, &'static str, String)> {
    report.justification.iter().map(|e| (e.rule.id(), e.anchor, e.statement.clone())).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `H^{p,q}(ℍ)`.
pub fn cohomology(h: &HartogsFigure, p: i64, q: i64) -> Result<CohomologyReport, CohomologyError> {
    let dim = h.dim();
    if q < 0 {
        return Err(CohomologyError::NegativeQ(q));
    }
    if p < 0 || p as usize > dim {
        return Err(CohomologyError::POutOfRange { p, dim });
    }
    let (p, q) = (p as usize, q as usize);
    let multiplicity = binomial(dim as u64, p as u64);
    let mut trail = Vec::new();

    let (class, reduced, indiscrete_model) = if q > 1 {
        trail.push(TrailEntry::new(RuleId::Vanish, format!("H^{{{p},{q}}} = 0 for q > 1")));
        (CohomClass::Zero, LaurentModel::empty(dim), None)
    } else if q == 0 {
        let hull = h.x().product(h.y());
        trail.push(TrailEntry::new(
            RuleId::Degree0,
            format!("H^{{{p},0}} = Ω^{p}(ℍ); every monomial on ℍ is holomorphic on {hull}"),
        ));
        (CohomClass::Hausdorff, LaurentModel::of_domain(&hull), None)
    } else {
        first_cohomology(h, &mut trail)?
    };

    if p > 0 {
        trail.push(TrailEntry::new(
            RuleId::Multiplicity,
            format!("H^{{{p},{q}}} ≅ {multiplicity} copies of H^{{0,{q}}}"),
        ));
    }
    let cardinality = if class == CohomClass::Zero { Cardinality::Zero } else { Cardinality::Uncountable };
    Ok(CohomologyReport {
        bidegree: (p, q),
        class,
        cardinality,
        multiplicity,
        reduced,
        indiscrete_model,
        justification: trail,
    })
}

type Decided = (CohomClass, LaurentModel, Option<IndiscreteModel>);

fn classify_both(h: &HartogsFigure) -> Result<(PairClass, PairClass), CohomologyError> {
    let px = classify_product_pair(h.x0(), h.x())?;
    let py = classify_product_pair(h.y0(), h.y())?;
    for (which, c) in [("X", &px), ("Y", &py)] {
        if c.tag == PairTag::Unsupported {
            let reason = c.reason.clone().unwrap_or_default();
            return Err(CohomologyError::Unsupported { which, reason });
        }
    }
    Ok((px, py))
}

fn first_cohomology(h: &HartogsFigure, trail: &mut Vec<TrailEntry>) -> Result<Decided, CohomologyError> {
    let (px, py) = classify_both(h)?;
    if px.tag != PairTag::Split && py.tag == PairTag::Split {
        trail.push(TrailEntry::new(RuleId::Swap, "only (Y0, Y) is split; exchange the pairs and transpose back"));
        let (class, reduced, ind) = split_first(&h.swapped(), &py, &px, trail)?;
        let perm = h.swapped().unswap_permutation();
        let ind = ind.map(|m| m.permute(&perm)).transpose()?;
        return Ok((class, reduced.permute(&perm)?, ind));
    }
    if px.tag == PairTag::Split {
        return split_first(h, &px, &py, trail);
    }
    if px.tag == PairTag::Runge || py.tag == PairTag::Runge {
        let mut statement = String::from("no split pair; a Runge pair makes the restriction image dense");
        if px.tag == PairTag::QuasiSplit || py.tag == PairTag::QuasiSplit {
            statement.push_str("; the finer decomposition against the quasi-split pair is not determined");
        }
        trail.push(TrailEntry::new(RuleId::RungeAny, statement));
        return Ok((CohomClass::Indiscrete, LaurentModel::empty(h.dim()), None));
    }
    Err(CohomologyError::NoApplicableRule(px.tag, py.tag))
}

/// Rules with `(X₀, X)` split.
fn split_first(h: &HartogsFigure, px: &PairClass, py: &PairClass, trail: &mut Vec<TrailEntry>) -> Result<Decided, CohomologyError> {
    let q = px.complement.as_ref().expect("split pairs carry a complement");
    let dim = h.dim();
    match py.tag {
        PairTag::Runge => {
            trail.push(TrailEntry::new(
                RuleId::SplitRunge,
                "H^{0,1} ≅ Q(X0,X) ⊗ O(Y0) / closure of Q(X0,X) ⊗ O(Y)|",
            ));
            let numerator = q.tensor(&LaurentModel::of_domain(h.y0()));
            let denominator = q.tensor(&LaurentModel::of_domain(h.y()));
            Ok((CohomClass::Indiscrete, LaurentModel::empty(dim), Some(IndiscreteModel { numerator, denominator })))
        }
        PairTag::Split => {
            trail.push(TrailEntry::new(RuleId::SplitSplit, "H^{0,1} ≅ Q(X0,X) ⊗ Q(Y0,Y)"));
            let qy = py.complement.as_ref().expect("split pairs carry a complement");
            Ok((CohomClass::Hausdorff, q.tensor(qy), None))
        }
        PairTag::QuasiSplit => {
            trail.push(TrailEntry::new(
                RuleId::SplitQuasiSplit,
                "H^{0,1}_red ≅ Q(X0,X) ⊗ Q_r(Y0,Y); H^{0,1}_ind ≅ Q(X0,X) ⊗ closure / Q(X0,X) ⊗ O(Y)|",
            ));
            let qr = py.complement.as_ref().expect("quasi-split pairs carry a complement");
            let closure = py.closure_of_restriction.as_ref().expect("quasi-split pairs carry a closure");
            let numerator = q.tensor(closure);
            let denominator = q.tensor(&LaurentModel::of_domain(h.y()));
            Ok((CohomClass::Mixed, q.tensor(qr), Some(IndiscreteModel { numerator, denominator })))
        }
        PairTag::Unsupported => unreachable!("rejected in classify_both"),
    }
}

/// Reduced spectrum by the quotient formula `Q(X₀,X) ⊗ (O(Y₀) / O(Y)|)`,
/// valid when `(X₀, X)` is split and `(Y₀, Y)` split or quasi-split.
pub fn formula_route_spectrum(h: &HartogsFigure) -> Result<Spectrum, CohomologyError> {
    let (px, py) = classify_both(h)?;
    if px.tag != PairTag::Split || !matches!(py.tag, PairTag::Split | PairTag::QuasiSplit) {
        return Err(CohomologyError::NoApplicableRule(px.tag, py.tag));
    }
    let qx = px.complement.expect("split pairs carry a complement").spectrum();
    let quotient = h.y0().spectrum().difference(&h.y().spectrum())?;
    Ok(qx.product(&quotient))
}

/// `{α ∈ [−W,W]ⁿ : α ∈ S(U₁₂), α ∉ S(U₁) ∪ S(U₂)}` by direct membership.
pub fn graded_reduced_spectrum(h: &HartogsFigure, w: u32) -> Vec<Vec<i64>> {
    graded_reduced_spectrum_with(h, w, Exec::default())
}

pub fn graded_reduced_spectrum_with(h: &HartogsFigure, w: u32, exec: Exec) -> Vec<Vec<i64>> {
    let cover = h.cover();
    let n = h.dim();
    let side = 2 * w as usize + 1;
    let rows = exec.map_range(side, |first| {
        let mut out = Vec::new();
        let mut alpha = vec![-(w as i64); n];
        alpha[0] = first as i64 - w as i64;
        loop {
            if cover.u12.admits_monomial(&alpha) && !cover.u1.admits_monomial(&alpha) && !cover.u2.admits_monomial(&alpha) {
                out.push(alpha.clone());
            }
            // odometer over the trailing coordinates
            let mut axis = n;
            loop {
                if axis == 1 {
                    return out;
                }
                axis -= 1;
                if alpha[axis] < w as i64 {
                    alpha[axis] += 1;
                    break;
                }
                alpha[axis] = -(w as i64);
            }
        }
    });
    rows.into_iter().flatten().collect()
}
