//! Homomorphism densities of finite graphs into step graphons, and an
//! executable pipeline of necessary conditions for a graph to be weakly
//! norming.
//!
//! The library has five parts:
//!
//! * [`graph`] — finite simple graphs with stable edge indices, graph6 and
//!   edge-list parsing, bipartiteness, components, isomorphism and
//!   automorphism search, edge orbits.
//! * [`graphon`] — step graphons (block partition of `[0,1]` plus a symmetric
//!   value matrix) and the pointwise operations on them.
//! * [`density`] — exact evaluation of the density `t_G(h)` and its
//!   multilinear form `t_G(h_1, ..., h_k)`, by brute-force summation and by
//!   bucket elimination along a min-fill ordering, plus edge-deleted
//!   densities and first-order perturbation coefficients.
//! * [`norming`] — the graph Hölder inequality check, the edge-deleted
//!   equality check, certificate searches for their violations, the
//!   necessary-condition pipeline, and the edge-pair automorphism trace.
//! * [`catalog`] — named graph families (paths, cycles, stars, complete
//!   bipartite graphs, hypercubes, toroidal grids) with literature notes.
//!
//! All numeric code is generic over the scalar type via [`Real`]; the
//! `*64`/`*32` aliases at the crate root pin the two floating-point
//! instantiations. Every search and sampler is deterministic for a fixed
//! seed.

use std::fmt::{Debug, Display};

pub mod catalog;
pub mod density;
pub mod graph;
pub mod graphon;
pub mod norming;
pub mod selftest;

mod kahan;

pub use kahan::CompensatedSum;

/// Scalar type for graphon values and densities: `f32` or `f64`.
pub trait Real: num_traits::Float + Debug + Display + 'static {}

impl<T: num_traits::Float + Debug + Display + 'static> Real for T {}

/// Converts an `f64` constant to the working scalar type.
///
/// Panics only if the target type cannot represent any `f64` at all, which
/// is not the case for the supported instantiations.
pub(crate) fn real<F: Real>(x: f64) -> F {
    F::from(x).expect("f64 constant must convert to the scalar type")
}

/// Converts the working scalar to `f64` for display and cross-type checks.
pub(crate) fn to_f64<F: Real>(x: F) -> f64 {
    x.to_f64().expect("scalar must convert to f64")
}

/// Default tolerances and budgets. Values are for the `f64` instantiation;
/// generic code converts them with `F::from`.
pub mod tol {
    /// Block weights must sum to one within this bound.
    pub const WEIGHT_SUM: f64 = 1e-12;
    /// Cut points closer than this merge during partition refinement.
    pub const CUT_MERGE: f64 = 1e-12;
    /// The graphon text parser accepts asymmetry up to this bound and then
    /// re-symmetrizes by averaging.
    pub const PARSE_SYMMETRY: f64 = 1e-9;
    /// Agreement between contraction and brute-force densities, relative to
    /// `max(1, |value|)`.
    pub const ORACLE_REL: f64 = 1e-10;
    /// `t_G(1) = 1` within this absolute bound.
    pub const NORMALIZATION: f64 = 1e-12;
    /// Edge-deleted identity agreement, relative to `max(1, |value|)`.
    pub const EDGE_DELETED_REL: f64 = 1e-10;
    /// Hölder margin may be this far below zero before counting as a
    /// violation in the positive test suites.
    pub const HOLDER_MARGIN: f64 = 1e-9;
    /// Structural equality checks (lemma gaps on symmetric inputs),
    /// relative to `max(1, |value|)`.
    pub const EQUALITY_REL: f64 = 1e-10;
    /// Violations below this absolute threshold are numeric noise, not
    /// certificates.
    pub const VIOLATION: f64 = 1e-6;
    /// Density-fingerprint comparisons use this absolute bound.
    pub const FINGERPRINT: f64 = 1e-9;
    /// Re-verification of certificates, relative to `max(1, |value|)`.
    pub const CERT_VERIFY_REL: f64 = 1e-10;
    /// Looser gate for rechecking persisted certificate files, whose
    /// values round-trip through decimal text.
    pub const CLI_VERIFY: f64 = 1e-8;
    /// Brute-force guard: refuse enumeration beyond this many block maps.
    pub const BRUTE_FORCE_STATES: f64 = 1e8;
    /// Default bucket-elimination budget in table entries.
    pub const TABLE_BUDGET: u64 = 1 << 28;
    /// Default cap on enumerated automorphism group order.
    pub const GROUP_ORDER_CAP: u64 = 10_000_000;
}

/// Relative error against `max(1, |a|, |b|)`, the scale used by the
/// density-agreement checks.
pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

pub use density::{ContractionPlan, DensityValue, EdgeAssignment, EvalMethod};
pub use graph::{Bipartition, EdgeOrbitPartition, Graph, VertexMapping};
pub use graphon::{SeparationCertificate, StepGraphon};
pub use norming::{
    HolderCertificate, HolderCheckResult, LemmaCertificate, NormingReport, SearchBudget,
    TheoremTrace, Verdict,
};

/// `f64` instantiations, the default working precision.
pub type StepGraphon64 = StepGraphon<f64>;
pub type DensityValue64 = DensityValue<f64>;
pub type EdgeAssignment64 = EdgeAssignment<f64>;
pub type NormingReport64 = NormingReport<f64>;

/// `f32` instantiations, for storage-constrained callers.
pub type StepGraphon32 = StepGraphon<f32>;
pub type DensityValue32 = DensityValue<f32>;
pub type EdgeAssignment32 = EdgeAssignment<f32>;
pub type NormingReport32 = NormingReport<f32>;
