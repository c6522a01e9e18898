//! Named figures and random supported figures for tests and benches.

use rand::seq::index;
use rand::Rng;

use crate::domains::{Factor1D, HartogsFigure, Radius, Rational, ReinhardtBoxDomain};

fn radius(r: Rational) -> Radius {
    Radius::new(r).expect("sample radii are positive")
}

fn disc(r: Rational) -> ReinhardtBoxDomain {
    ReinhardtBoxDomain::single(Factor1D::disc(radius(r)))
}

fn annulus(r: Rational, big_r: Rational) -> ReinhardtBoxDomain {
    ReinhardtBoxDomain::single(Factor1D::annulus(radius(r), radius(big_r)).expect("sample annuli have r < R"))
}

fn unit() -> Rational {
    Rational::from(1)
}

/// `(Δ × Δ_{r₂}) ∪ (Δ_{r₁} × Δ)`: both pairs Runge.
pub fn h0(r1: Rational, r2: Rational) -> HartogsFigure {
    HartogsFigure::new(disc(unit()), disc(r1), disc(unit()), disc(r2)).expect("valid figure")
}

/// The classical figure `{|z₁| > r₁ or |z₂| < r₂}` in the bidisc.
pub fn h1(r1: Rational, r2: Rational) -> HartogsFigure {
    HartogsFigure::new(disc(unit()), annulus(r1, unit()), disc(unit()), disc(r2)).expect("valid figure")
}

/// The bidisc minus the closed polydisc of radii `(r₁, r₂)`.
pub fn h2(r1: Rational, r2: Rational) -> HartogsFigure {
    HartogsFigure::new(disc(unit()), annulus(r1, unit()), disc(unit()), annulus(r2, unit())).expect("valid figure")
}

/// Split first pair, quasi-split second pair `(A(r₂,R), Δ)`.
pub fn h3(r1: Rational, r2: Rational, big_r: Rational) -> HartogsFigure {
    HartogsFigure::new(disc(unit()), annulus(r1, unit()), disc(unit()), annulus(r2, big_r)).expect("valid figure")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    NestedDiscs,
    Split,
    QuasiSplit,
    NestedAnnuli,
}

pub const PAIR_KINDS: [PairKind; 4] = [PairKind::NestedDiscs, PairKind::Split, PairKind::QuasiSplit, PairKind::NestedAnnuli];

/// `k` distinct fractions `n/d` in `(0,1)`, increasing.
fn fractions<R: Rng + ?Sized>(rng: &mut R, d: i64, k: usize) -> Vec<Rational> {
    let mut picks: Vec<i64> = index::sample(rng, (d - 1) as usize, k).into_iter().map(|i| i as i64 + 1).collect();
    picks.sort_unstable();
    picks.into_iter().map(|n| Rational::new(n, d)).collect()
}

/// A random one-variable pair `(Z₀, Z)` of the given kind, radii in `(0,1)`.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, kind: PairKind) -> (ReinhardtBoxDomain, ReinhardtBoxDomain) {
    let d = rng.random_range(8..=97);
    match kind {
        PairKind::NestedDiscs => {
            let f = fractions(rng, d, 2);
            (disc(f[0]), disc(f[1]))
        }
        PairKind::Split => {
            let f = fractions(rng, d, 2);
            (annulus(f[0], f[1]), disc(f[1]))
        }
        PairKind::QuasiSplit => {
            let f = fractions(rng, d, 3);
            (annulus(f[0], f[1]), disc(f[2]))
        }
        PairKind::NestedAnnuli => {
            // outer annulus (f0, f3), inner one strictly smaller on at least one side
            let f = fractions(rng, d, 4);
            let (lo, hi) = match rng.random_range(0..3) {
                0 => (f[0], f[2]),
                1 => (f[1], f[3]),
                _ => (f[1], f[2]),
            };
            (annulus(lo, hi), annulus(f[0], f[3]))
        }
    }
}

/// A random 1+1 dimensional figure whose cohomology the engine decides.
pub fn random_supported_figure<R: Rng + ?Sized>(rng: &mut R) -> HartogsFigure {
    loop {
        let kx = PAIR_KINDS[rng.random_range(0..4)];
        let ky = PAIR_KINDS[rng.random_range(0..4)];
        if kx == PairKind::QuasiSplit && ky == PairKind::QuasiSplit {
            continue;
        }
        let (x0, x) = random_pair(rng, kx);
        let (y0, y) = random_pair(rng, ky);
        return HartogsFigure::new(x, x0, y, y0).expect("random pairs are proper");
    }
}
