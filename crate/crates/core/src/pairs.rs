//! Classification of Stein pairs `(Z₀, Z)` of Reinhardt box domains.
//!
//! The classifier is a closed decision table. Shapes outside the table come
//! back as [`PairTag::Unsupported`] with a reason, never as a guess.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::domains::{DomainError, Factor1D, LaurentModel, ReinhardtBoxDomain};
use crate::lattice::LatticeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("{inner} is not contained in {outer}")]
    NotContained { inner: String, outer: String },
    #[error("a Stein pair needs Z0 != Z (both are {0})")]
    EqualDomains(String),
    #[error("single-factor classification needs dimension 1, got {0}")]
    NotOneDimensional(usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairTag {
    Runge,
    Split,
    QuasiSplit,
    Unsupported,
}

impl fmt::Display for PairTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairTag::Runge => "Runge",
            PairTag::Split => "Split",
            PairTag::QuasiSplit => "QuasiSplit",
            PairTag::Unsupported => "Unsupported",
        })
    }
}

/// Which row of the decision table fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairRule {
    /// `(Δ_r, Δ_R)`: polynomials are dense in both discs.
    NestedDiscs,
    /// `(A(r,R), Δ_R)`: Laurent splitting into nonnegative and negative parts.
    LaurentSplit,
    /// `(A(r,R), Δ_R')` with `R < R'`: split into `Δ_R`, then Runge out to `Δ_R'`.
    SplitThenRunge,
    /// Nested annuli: Laurent polynomials are dense in both (table extension).
    NestedAnnuli,
    /// Products whose proper factors are all Runge.
    ProductRunge,
    /// Products whose proper factors are all split disc/annulus pairs.
    ProductSplit,
    /// Outside the table.
    NoRule,
}

impl PairRule {
    pub fn id(self) -> &'static str {
        match self {
            PairRule::NestedDiscs => "P-RUNGE-DISCS",
            PairRule::LaurentSplit => "P-SPLIT-LAURENT",
            PairRule::SplitThenRunge => "P-QSPLIT-INTERMEDIATE",
            PairRule::NestedAnnuli => "P-RUNGE-ANNULI-EXT",
            PairRule::ProductRunge => "P-PRODUCT-RUNGE",
            PairRule::ProductSplit => "P-PRODUCT-SPLIT",
            PairRule::NoRule => "P-UNSUPPORTED",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            PairRule::NestedDiscs => "holomorphic polynomials are dense in O(Δ_r) and O(Δ_R)",
            PairRule::LaurentSplit => {
                "O(A(r,R)) = O(Δ_R)| ⊕ {negative-power Laurent series}, both summands closed"
            }
            PairRule::SplitThenRunge => {
                "(A(r,R), Δ_R) is split and (Δ_R, Δ_R') is Runge, so the restriction has a complemented closure O(Δ_R)|"
            }
            PairRule::NestedAnnuli => "extension: Laurent polynomials are dense in O of both annuli",
            PairRule::ProductRunge => "tensor product of Runge factor pairs with identity factors is Runge",
            PairRule::ProductSplit => {
                "Reinhardt subdomain near the Šilov boundary of a complete Reinhardt polydisc: complement is the non-ℕⁿ Laurent part"
            }
            PairRule::NoRule => "no row of the decision table covers this shape",
        }
    }
}

impl Serialize for PairRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

/// Classification of a Stein pair with its Laurent-series complements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairClass {
    pub tag: PairTag,
    /// `Q(Z₀,Z)` for split pairs, `Q_r(Z₀,Z)` for quasi-split pairs.
    pub complement: Option<LaurentModel>,
    /// Model of the closure of `O(Z)|_{Z₀}` inside `O(Z₀)`.
    pub closure_of_restriction: Option<LaurentModel>,
    pub witness_rule: PairRule,
    /// The intermediate domain `Z₁` of a quasi-split pair.
    pub intermediate: Option<ReinhardtBoxDomain>,
    pub reason: Option<String>,
}

impl PairClass {
    fn runge(rule: PairRule, z0: &ReinhardtBoxDomain) -> Self {
        PairClass {
            tag: PairTag::Runge,
            complement: None,
            closure_of_restriction: Some(LaurentModel::of_domain(z0)),
            witness_rule: rule,
            intermediate: None,
            reason: None,
        }
    }

    fn split(rule: PairRule, z0: &ReinhardtBoxDomain, z: &ReinhardtBoxDomain) -> Result<Self, PairError> {
        let complement_spectrum = z0.spectrum().difference(&z.spectrum())?;
        Ok(PairClass {
            tag: PairTag::Split,
            complement: Some(LaurentModel::natural(&complement_spectrum, z0)?),
            closure_of_restriction: Some(LaurentModel::of_domain(z)),
            witness_rule: rule,
            intermediate: None,
            reason: None,
        })
    }

    fn unsupported(reason: String) -> Self {
        PairClass {
            tag: PairTag::Unsupported,
            complement: None,
            closure_of_restriction: None,
            witness_rule: PairRule::NoRule,
            intermediate: None,
            reason: Some(reason),
        }
    }

    pub fn is_supported(&self) -> bool {
        self.tag != PairTag::Unsupported
    }
}

fn check_pair(z0: &ReinhardtBoxDomain, z: &ReinhardtBoxDomain) -> Result<(), PairError> {
    if !z0.is_subset_of(z)? {
        return Err(PairError::NotContained { inner: z0.to_string(), outer: z.to_string() });
    }
    if z0 == z {
        return Err(PairError::EqualDomains(z.to_string()));
    }
    Ok(())
}

/// Classify a one-variable pair `(Z₀, Z)`.
pub fn classify_pair(z0: &ReinhardtBoxDomain, z: &ReinhardtBoxDomain) -> Result<PairClass, PairError> {
    if z0.dim() != 1 || z.dim() != 1 {
        return Err(PairError::NotOneDimensional(z0.dim().max(z.dim())));
    }
    check_pair(z0, z)?;
    let class = match (z0.factors()[0], z.factors()[0]) {
        (Factor1D::Disc { .. }, Factor1D::Disc { .. }) => PairClass::runge(PairRule::NestedDiscs, z0),
        (Factor1D::Annulus { outer, .. }, Factor1D::Disc { radius }) if outer == radius => {
            PairClass::split(PairRule::LaurentSplit, z0, z)?
        }
        (Factor1D::Annulus { outer, .. }, Factor1D::Disc { .. }) => {
            let x1 = ReinhardtBoxDomain::single(Factor1D::disc(outer));
            let inner = classify_pair(z0, &x1)?;
            PairClass {
                tag: PairTag::QuasiSplit,
                complement: inner.complement,
                closure_of_restriction: Some(LaurentModel::of_domain(&x1)),
                witness_rule: PairRule::SplitThenRunge,
                intermediate: Some(x1),
                reason: None,
            }
        }
        (Factor1D::Annulus { .. }, Factor1D::Annulus { .. }) => PairClass::runge(PairRule::NestedAnnuli, z0),
        (Factor1D::Disc { .. }, Factor1D::Annulus { .. }) => unreachable!("containment checked above"),
    };
    Ok(class)
}

/// Classify `(Z₀, Z)` factor by factor.
pub fn classify_product_pair(z0: &ReinhardtBoxDomain, z: &ReinhardtBoxDomain) -> Result<PairClass, PairError> {
    check_pair(z0, z)?;
    if z0.dim() == 1 {
        return classify_pair(z0, z);
    }
    let mut tags = Vec::new();
    for (i, (a, b)) in z0.factors().iter().zip(z.factors()).enumerate() {
        if a == b {
            continue;
        }
        let c = classify_pair(&ReinhardtBoxDomain::single(*a), &ReinhardtBoxDomain::single(*b))?;
        tags.push((i, c.tag));
    }
    if tags.iter().all(|(_, t)| *t == PairTag::Runge) {
        return Ok(PairClass::runge(PairRule::ProductRunge, z0));
    }
    if tags.iter().all(|(_, t)| *t == PairTag::Split) {
        return PairClass::split(PairRule::ProductSplit, z0, z);
    }
    let detail: Vec<String> = tags.iter().map(|(i, t)| format!("factor {i}: {t}")).collect();
    Ok(PairClass::unsupported(format!("mixed factor classes ({})", detail.join(", "))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::{Radius, Rational};
    use crate::lattice::{Interval, Spectrum};
    use std::collections::BTreeSet;

    fn r(n: i64, d: i64) -> Radius {
        Radius::ratio(n, d).unwrap()
    }

    fn disc(n: i64, d: i64) -> Factor1D {
        Factor1D::disc(r(n, d))
    }

    fn ann(a: (i64, i64), b: (i64, i64)) -> Factor1D {
        Factor1D::annulus(r(a.0, a.1), r(b.0, b.1)).unwrap()
    }

    fn dom(fs: &[Factor1D]) -> ReinhardtBoxDomain {
        ReinhardtBoxDomain::new(fs.to_vec()).unwrap()
    }

    fn neg1() -> Spectrum {
        Spectrum::from_intervals(vec![Interval::at_most(-1)]).unwrap()
    }

    fn a_inf(n: i64, d: i64) -> ReinhardtBoxDomain {
        dom(&[Factor1D::annulus(r(n, d), Radius::Infinite).unwrap()])
    }

    #[test]
    fn nested_discs_are_runge() {
        let c = classify_pair(&dom(&[disc(1, 2)]), &dom(&[disc(1, 1)])).unwrap();
        assert_eq!(c.tag, PairTag::Runge);
        assert!(c.complement.is_none());
        assert_eq!(c.closure_of_restriction.unwrap(), LaurentModel::of_domain(&dom(&[disc(1, 2)])));
    }

    #[test]
    fn annulus_in_disc_of_same_radius_is_split() {
        let c = classify_pair(&dom(&[ann((1, 2), (1, 1))]), &dom(&[disc(1, 1)])).unwrap();
        assert_eq!(c.tag, PairTag::Split);
        let q = c.complement.unwrap();
        assert_eq!(q.spectrum(), neg1());
        assert_eq!(q.convergence().unwrap(), &a_inf(1, 2));
        let closure = c.closure_of_restriction.unwrap();
        assert_eq!(closure.spectrum(), Spectrum::from_intervals(vec![Interval::at_least(0)]).unwrap());
        assert_eq!(closure.convergence().unwrap(), &dom(&[disc(1, 1)]));
    }

    #[test]
    fn annulus_in_larger_disc_is_quasi_split() {
        let z0 = dom(&[ann((1, 2), (3, 4))]);
        let c = classify_pair(&z0, &dom(&[disc(1, 1)])).unwrap();
        assert_eq!(c.tag, PairTag::QuasiSplit);
        assert_eq!(c.intermediate, Some(dom(&[disc(3, 4)])));
        // Q_r(A(r,R), Δ) = Q(A(r,R), Δ_R)
        let via = classify_pair(&z0, &dom(&[disc(3, 4)])).unwrap();
        assert_eq!(via.tag, PairTag::Split);
        assert_eq!(c.complement, via.complement);
        let q = c.complement.unwrap();
        assert_eq!(q.spectrum(), neg1());
        assert_eq!(q.convergence().unwrap(), &a_inf(1, 2));
        // closure has O(Δ)'s spectrum on a strictly smaller disc
        let closure = c.closure_of_restriction.unwrap();
        assert_eq!(closure.spectrum(), dom(&[disc(1, 1)]).spectrum());
        let conv = closure.convergence().unwrap();
        assert!(conv.is_subset_of(&dom(&[disc(1, 1)])).unwrap());
        assert_ne!(conv, &dom(&[disc(1, 1)]));
        // complement disjoint from the spectrum of Z
        assert!(q.spectrum().is_disjoint_from(&dom(&[disc(1, 1)]).spectrum()).unwrap());
    }

    #[test]
    fn nested_annuli_are_runge_extension() {
        let c = classify_pair(&dom(&[ann((1, 2), (3, 4))]), &dom(&[ann((1, 4), (1, 1))])).unwrap();
        assert_eq!(c.tag, PairTag::Runge);
        assert_eq!(c.witness_rule, PairRule::NestedAnnuli);
        assert!(c.witness_rule.statement().starts_with("extension"));
    }

    #[test]
    fn pair_errors() {
        assert!(matches!(
            classify_pair(&dom(&[disc(1, 1)]), &dom(&[disc(1, 1)])),
            Err(PairError::EqualDomains(_))
        ));
        assert!(matches!(
            classify_pair(&dom(&[disc(1, 2)]), &dom(&[ann((1, 4), (1, 1))])),
            Err(PairError::NotContained { .. })
        ));
        assert!(matches!(
            classify_pair(&dom(&[disc(1, 2), disc(1, 2)]), &dom(&[disc(1, 1), disc(1, 1)])),
            Err(PairError::NotOneDimensional(2))
        ));
    }

    #[test]
    fn product_examples() {
        let d = disc(1, 1);
        let c = classify_product_pair(&dom(&[disc(1, 2), disc(1, 2)]), &dom(&[d, d])).unwrap();
        assert_eq!(c.tag, PairTag::Runge);

        let z0 = dom(&[ann((1, 2), (1, 1)), d]);
        let z = dom(&[d, d]);
        let c = classify_product_pair(&z0, &z).unwrap();
        assert_eq!(c.tag, PairTag::Split);
        let q = c.complement.unwrap().spectrum();
        let expected = Spectrum::from_intervals(vec![Interval::at_most(-1), Interval::at_least(0)]).unwrap();
        assert_eq!(q, expected);
        // graded shadow of O(Z₀) = O(Z)| ⊕ Q at W = 8
        let qs: BTreeSet<_> = q.enumerate_window(8).into_iter().collect();
        let zs: BTreeSet<_> = z.spectrum().enumerate_window(8).into_iter().collect();
        let z0s: BTreeSet<_> = z0.spectrum().enumerate_window(8).into_iter().collect();
        assert!(qs.is_disjoint(&zs));
        assert_eq!(qs.union(&zs).cloned().collect::<BTreeSet<_>>(), z0s);

        let c = classify_product_pair(&dom(&[ann((1, 2), (1, 1)), disc(1, 2)]), &dom(&[d, d])).unwrap();
        assert_eq!(c.tag, PairTag::Unsupported);
        assert!(c.reason.unwrap().contains("mixed"));
    }

    #[test]
    fn product_split_in_both_factors() {
        let a = ann((1, 2), (1, 1));
        let d = disc(1, 1);
        let c = classify_product_pair(&dom(&[a, a]), &dom(&[d, d])).unwrap();
        assert_eq!(c.tag, PairTag::Split);
        let q = c.complement.unwrap();
        assert_eq!(q.summands().len(), 2);
        let expected = Spectrum::full(2)
            .difference(&Spectrum::from_intervals(vec![Interval::at_least(0); 2]).unwrap())
            .unwrap();
        assert_eq!(q.spectrum(), expected);
    }

    fn window(s: &Spectrum, w: u32) -> BTreeSet<Vec<i64>> {
        s.enumerate_window(w).into_iter().collect()
    }

    fn split_cases() -> Vec<(ReinhardtBoxDomain, ReinhardtBoxDomain)> {
        let d = disc(1, 1);
        vec![
            (dom(&[ann((1, 2), (1, 1))]), dom(&[d])),
            (dom(&[ann((1, 3), (2, 3))]), dom(&[disc(2, 3)])),
            (dom(&[ann((1, 2), (1, 1)), d]), dom(&[d, d])),
            (dom(&[ann((1, 2), (1, 1)), ann((1, 5), (1, 1))]), dom(&[d, d])),
            (dom(&[d, ann((1, 5), (1, 1))]), dom(&[d, d])),
        ]
    }

    #[test]
    fn split_partitions_the_spectrum_at_w16() {
        for (z0, z) in split_cases() {
            let c = classify_product_pair(&z0, &z).unwrap();
            assert_eq!(c.tag, PairTag::Split, "{z0} in {z}");
            let q = window(&c.complement.unwrap().spectrum(), 16);
            let zs = window(&z.spectrum(), 16);
            assert!(q.is_disjoint(&zs));
            assert_eq!(q.union(&zs).cloned().collect::<BTreeSet<_>>(), window(&z0.spectrum(), 16));
        }
    }

    #[test]
    fn classification_is_invariant_under_scaling() {
        let cases = [
            (dom(&[disc(1, 2)]), dom(&[disc(1, 1)])),
            (dom(&[ann((1, 2), (1, 1))]), dom(&[disc(1, 1)])),
            (dom(&[ann((1, 2), (3, 4))]), dom(&[disc(1, 1)])),
            (dom(&[ann((1, 2), (3, 4))]), dom(&[ann((1, 3), (1, 1))])),
        ];
        for k in [Rational::new(1, 3), Rational::new(5, 2), Rational::new(7, 11)] {
            for (z0, z) in &cases {
                let a = classify_pair(z0, z).unwrap();
                let b = classify_pair(&z0.scale(k).unwrap(), &z.scale(k).unwrap()).unwrap();
                assert_eq!(a.tag, b.tag);
                assert_eq!(a.complement.as_ref().map(|m| m.spectrum()), b.complement.as_ref().map(|m| m.spectrum()));
                if let (Some(ma), Some(mb)) = (&a.complement, &b.complement) {
                    assert_eq!(&ma.convergence().unwrap().scale(k).unwrap(), mb.convergence().unwrap());
                }
                let ca = a.closure_of_restriction.unwrap();
                let cb = b.closure_of_restriction.unwrap();
                assert_eq!(ca.spectrum(), cb.spectrum());
                assert_eq!(&ca.convergence().unwrap().scale(k).unwrap(), cb.convergence().unwrap());
            }
        }
    }
}
