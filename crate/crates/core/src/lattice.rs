//! Exact set algebra over regions of ℤⁿ.
//!
//! A region is a finite union of axis-aligned integer boxes whose endpoints
//! may be infinite. Every operation goes through a per-axis slab sweep that
//! produces a canonical box list: on each axis the line is cut into maximal
//! runs over which the cross-section is constant, and the cross-sections are
//! canonicalized recursively. Two canonical spectra describe the same set iff
//! their box lists are identical.

use std::cmp::Ordering;
use std::fmt;

use serde::ser::{Serialize, SerializeSeq, SerializeStruct, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: ExtInt, hi: ExtInt },
    #[error("spectra must have dimension at least 1")]
    ZeroDimension,
}

/// An integer extended by the two infinities.
///
/// The derived ordering is the intended one: `NegInf < Fin(k) < PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

impl ExtInt {
    pub fn finite(self) -> Option<i64> {
        match self {
            ExtInt::Fin(k) => Some(k),
            _ => None,
        }
    }

    fn le_int(self, k: i64) -> bool {
        self <= ExtInt::Fin(k)
    }

    fn ge_int(self, k: i64) -> bool {
        self >= ExtInt::Fin(k)
    }
}

impl From<i64> for ExtInt {
    fn from(k: i64) -> Self {
        ExtInt::Fin(k)
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::Fin(k) => write!(f, "{k}"),
            ExtInt::PosInf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtInt::NegInf => s.serialize_str("-inf"),
            ExtInt::Fin(k) => s.serialize_i64(*k),
            ExtInt::PosInf => s.serialize_str("inf"),
        }
    }
}

/// Closed integer interval `[lo, hi]`, never empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: ExtInt,
    hi: ExtInt,
}

impl Interval {
    pub fn new(lo: ExtInt, hi: ExtInt) -> Result<Self, LatticeError> {
        if lo == ExtInt::PosInf || hi == ExtInt::NegInf || lo > hi {
            return Err(LatticeError::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// All of ℤ.
    pub const fn all() -> Self {
        Interval { lo: ExtInt::NegInf, hi: ExtInt::PosInf }
    }

    /// `{k, k+1, ...}`.
    pub const fn at_least(k: i64) -> Self {
        Interval { lo: ExtInt::Fin(k), hi: ExtInt::PosInf }
    }

    /// `{..., k-1, k}`.
    pub const fn at_most(k: i64) -> Self {
        Interval { lo: ExtInt::NegInf, hi: ExtInt::Fin(k) }
    }

    pub fn closed(lo: i64, hi: i64) -> Result<Self, LatticeError> {
        Interval::new(ExtInt::Fin(lo), ExtInt::Fin(hi))
    }

    pub fn lo(&self) -> ExtInt {
        self.lo
    }

    pub fn hi(&self) -> ExtInt {
        self.hi
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo.le_int(k) && self.hi.ge_int(k)
    }

    pub fn covers(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        Interval::new(self.lo.max(other.lo), self.hi.min(other.hi)).ok()
    }

    /// Clip to `[-w, w]`, returning finite bounds.
    fn clip(&self, w: i64) -> Option<(i64, i64)> {
        let lo = match self.lo {
            ExtInt::NegInf => -w,
            ExtInt::Fin(k) => k.max(-w),
            ExtInt::PosInf => return None,
        };
        let hi = match self.hi {
            ExtInt::PosInf => w,
            ExtInt::Fin(k) => k.min(w),
            ExtInt::NegInf => return None,
        };
        (lo <= hi).then_some((lo, hi))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&self.lo)?;
        seq.serialize_element(&self.hi)?;
        seq.end()
    }
}

/// A product of intervals, one per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    axes: Vec<Interval>,
}

impl LatticeBox {
    pub fn new(axes: Vec<Interval>) -> Result<Self, LatticeError> {
        if axes.is_empty() {
            return Err(LatticeError::ZeroDimension);
        }
        Ok(LatticeBox { axes })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.axes.len() && self.axes.iter().zip(point).all(|(iv, &k)| iv.contains(k))
    }

    pub fn intersect(&self, other: &LatticeBox) -> Option<LatticeBox> {
        let axes = self
            .axes
            .iter()
            .zip(&other.axes)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()?;
        Some(LatticeBox { axes })
    }

    pub fn product(&self, other: &LatticeBox) -> LatticeBox {
        let mut axes = self.axes.clone();
        axes.extend_from_slice(&other.axes);
        LatticeBox { axes }
    }

    fn lo_key(&self) -> impl Iterator<Item = ExtInt> + '_ {
        self.axes.iter().map(|iv| iv.lo)
    }

    fn hi_key(&self) -> impl Iterator<Item = ExtInt> + '_ {
        self.axes.iter().map(|iv| iv.hi)
    }
}

impl Ord for LatticeBox {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lo_key()
            .cmp(other.lo_key())
            .then_with(|| self.hi_key().cmp(other.hi_key()))
    }
}

impl PartialOrd for LatticeBox {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for LatticeBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.axes.iter().enumerate() {
            if i > 0 {
                f.write_str("×")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

impl Serialize for LatticeBox {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.axes.serialize(s)
    }
}

/// A finite union of lattice boxes in ℤⁿ.
///
/// Values built by the set operations are canonical: boxes are nonempty,
/// pairwise disjoint, sorted, and uniquely determined by the set.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dim: usize,
    boxes: Vec<LatticeBox>,
    canonical: bool,
}

#[derive(Clone, Copy)]
enum SetOp {
    Union,
    Intersect,
    Difference,
}

impl SetOp {
    fn apply(self, in_a: bool, in_b: bool) -> bool {
        match self {
            SetOp::Union => in_a || in_b,
            SetOp::Intersect => in_a && in_b,
            SetOp::Difference => in_a && !in_b,
        }
    }
}

impl Spectrum {
    /// Build from an arbitrary (possibly overlapping) box list.
    pub fn from_boxes(dim: usize, boxes: Vec<LatticeBox>) -> Result<Self, LatticeError> {
        if dim == 0 {
            return Err(LatticeError::ZeroDimension);
        }
        if let Some(b) = boxes.iter().find(|b| b.dim() != dim) {
            return Err(LatticeError::DimensionMismatch { expected: dim, found: b.dim() });
        }
        let canonical = boxes_trivially_canonical(&boxes);
        Ok(Spectrum { dim, boxes, canonical })
    }

    /// Build and canonicalize in one step.
    pub fn from_box_list(dim: usize, boxes: Vec<LatticeBox>) -> Result<Self, LatticeError> {
        Ok(Spectrum::from_boxes(dim, boxes)?.canonicalize())
    }

    pub fn single(b: LatticeBox) -> Self {
        Spectrum { dim: b.dim(), boxes: vec![b], canonical: true }
    }

    pub fn from_intervals(axes: Vec<Interval>) -> Result<Self, LatticeError> {
        Ok(Spectrum::single(LatticeBox::new(axes)?))
    }

    pub fn empty(dim: usize) -> Self {
        Spectrum { dim, boxes: Vec::new(), canonical: true }
    }

    pub fn full(dim: usize) -> Self {
        Spectrum::single(LatticeBox { axes: vec![Interval::all(); dim] })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn boxes(&self) -> &[LatticeBox] {
        &self.boxes
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        self.boxes.iter().any(|b| b.contains(point))
    }

    pub fn canonicalize(&self) -> Spectrum {
        if self.canonical {
            return self.clone();
        }
        let refs: Vec<&LatticeBox> = self.boxes.iter().collect();
        Spectrum::from_sweep(self.dim, &refs, &[], SetOp::Union)
    }

    pub fn union(&self, other: &Spectrum) -> Result<Spectrum, LatticeError> {
        self.combine(other, SetOp::Union)
    }

    pub fn intersect(&self, other: &Spectrum) -> Result<Spectrum, LatticeError> {
        self.combine(other, SetOp::Intersect)
    }

    pub fn difference(&self, other: &Spectrum) -> Result<Spectrum, LatticeError> {
        self.combine(other, SetOp::Difference)
    }

    pub fn is_subset_of(&self, other: &Spectrum) -> Result<bool, LatticeError> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn is_disjoint_from(&self, other: &Spectrum) -> Result<bool, LatticeError> {
        Ok(self.intersect(other)?.is_empty())
    }

    /// Cartesian product; coordinates of `self` come first.
    pub fn product(&self, other: &Spectrum) -> Spectrum {
        let boxes = self
            .boxes
            .iter()
            .flat_map(|a| other.boxes.iter().map(move |b| a.product(b)))
            .collect();
        let out = Spectrum { dim: self.dim + other.dim, boxes, canonical: false };
        out.canonicalize()
    }

    /// Reorder coordinates: axis `i` of the result is axis `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Spectrum, LatticeError> {
        if perm.len() != self.dim {
            return Err(LatticeError::DimensionMismatch { expected: self.dim, found: perm.len() });
        }
        let boxes = self
            .boxes
            .iter()
            .map(|b| LatticeBox { axes: perm.iter().map(|&j| b.axes[j]).collect() })
            .collect();
        Ok(Spectrum { dim: self.dim, boxes, canonical: false }.canonicalize())
    }

    /// Points with every coordinate in `[-w, w]`, lexicographically sorted.
    pub fn enumerate_window(&self, w: u32) -> Vec<Vec<i64>> {
        let w = i64::from(w);
        let mut points = Vec::new();
        for b in &self.boxes {
            let Some(ranges) = b.axes.iter().map(|iv| iv.clip(w)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let mut cursor: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            'outer: loop {
                points.push(cursor.clone());
                for axis in (0..cursor.len()).rev() {
                    if cursor[axis] < ranges[axis].1 {
                        cursor[axis] += 1;
                        continue 'outer;
                    }
                    cursor[axis] = ranges[axis].0;
                }
                break;
            }
        }
        points.sort_unstable();
        if !self.canonical {
            points.dedup();
        }
        points
    }

    fn combine(&self, other: &Spectrum, op: SetOp) -> Result<Spectrum, LatticeError> {
        if self.dim != other.dim {
            return Err(LatticeError::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let a: Vec<&LatticeBox> = self.boxes.iter().collect();
        let b: Vec<&LatticeBox> = other.boxes.iter().collect();
        Ok(Spectrum::from_sweep(self.dim, &a, &b, op))
    }

    fn from_sweep(dim: usize, a: &[&LatticeBox], b: &[&LatticeBox], op: SetOp) -> Spectrum {
        let mut boxes: Vec<LatticeBox> = sweep(0, dim, a, b, op)
            .into_iter()
            .map(|axes| LatticeBox { axes })
            .collect();
        boxes.sort();
        Spectrum { dim, boxes, canonical: true }
    }
}

fn boxes_trivially_canonical(boxes: &[LatticeBox]) -> bool {
    boxes.len() <= 1
}

/// Canonical box list (as axis vectors for `axis..dim`) of the set
/// `{x : op(x ∈ ∪a, x ∈ ∪b)}`.
fn sweep(axis: usize, dim: usize, a: &[&LatticeBox], b: &[&LatticeBox], op: SetOp) -> Vec<Vec<Interval>> {
    if axis == dim {
        return if op.apply(!a.is_empty(), !b.is_empty()) { vec![Vec::new()] } else { Vec::new() };
    }

    let mut cuts: Vec<i64> = Vec::new();
    for bx in a.iter().chain(b) {
        let iv = bx.axes[axis];
        if let ExtInt::Fin(k) = iv.lo {
            cuts.push(k);
        }
        if let ExtInt::Fin(k) = iv.hi {
            cuts.push(k.saturating_add(1));
        }
    }
    cuts.sort_unstable();
    cuts.dedup();

    let mut segments = Vec::with_capacity(cuts.len() + 1);
    let mut lo = ExtInt::NegInf;
    for &c in &cuts {
        let hi = ExtInt::Fin(c - 1);
        if lo <= hi {
            segments.push(Interval { lo, hi });
        }
        lo = ExtInt::Fin(c);
    }
    segments.push(Interval { lo, hi: ExtInt::PosInf });

    // (run interval, canonical cross-section)
    let mut runs: Vec<(Interval, Vec<Vec<Interval>>)> = Vec::new();
    let mut prev_adjacent = false;
    for seg in segments {
        let sub_a: Vec<&LatticeBox> = a.iter().copied().filter(|bx| bx.axes[axis].covers(&seg)).collect();
        let sub_b: Vec<&LatticeBox> = b.iter().copied().filter(|bx| bx.axes[axis].covers(&seg)).collect();
        let section = sweep(axis + 1, dim, &sub_a, &sub_b, op);
        if section.is_empty() {
            prev_adjacent = false;
            continue;
        }
        match runs.last_mut() {
            Some((run, prev)) if prev_adjacent && *prev == section => run.hi = seg.hi,
            _ => runs.push((seg, section)),
        }
        prev_adjacent = true;
    }

    let mut out = Vec::new();
    for (run, section) in runs {
        for rest in section {
            let mut axes = Vec::with_capacity(dim - axis);
            axes.push(run);
            axes.extend(rest);
            out.push(axes);
        }
    }
    out
}

impl PartialEq for Spectrum {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (self.canonical, other.canonical) {
            (true, true) => self.boxes == other.boxes,
            _ => self.canonicalize().boxes == other.canonicalize().boxes,
        }
    }
}

impl Eq for Spectrum {}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.boxes.is_empty() {
            return f.write_str("∅");
        }
        for (i, b) in self.boxes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let canon = self.canonicalize();
        let mut st = s.serialize_struct("Spectrum", 2)?;
        st.serialize_field("boxes", &canon.boxes)?;
        st.serialize_field("dim", &canon.dim)?;
        st.end()
    }
}
