//! Symbolic cohomology of generalized Hartogs figures.
//!
//! A figure `(X × Y₀) ∪ (X₀ × Y)` is assembled from products of discs and
//! annuli with exact rational radii. The engine classifies the two Stein
//! pairs `(X₀, X)` and `(Y₀, Y)`, computes every `H^{p,q}` through the
//! two-piece Leray cover, and describes the reduced and indiscrete parts as
//! spaces of Laurent series. Independent checks live next to the engine: a
//! per-monomial lattice oracle, log-convex hull geometry for the envelope,
//! and torus quadrature for coefficient functionals.

pub mod cech;
pub mod domains;
pub mod envelope;
pub mod lattice;
pub mod numeric;
pub mod pairs;
pub mod par;
pub mod sample;

pub use cech::{cohomology, graded_reduced_spectrum, Cardinality, CohomClass, CohomologyError, CohomologyReport};
pub use domains::{Factor1D, HartogsFigure, LaurentModel, Radius, Rational, ReinhardtBoxDomain};
pub use envelope::{log_convex_hull, log_image, stein_certificate, SteinCertificate};
pub use lattice::{ExtInt, Interval, LatticeBox, Spectrum};
pub use pairs::{classify_pair, classify_product_pair, PairClass, PairTag};
pub use par::Exec;
