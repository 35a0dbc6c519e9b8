//! Executable necessary conditions for weak norming: the edge-version
//! Hölder inequality check, the edge-deleted equality check with
//! certificate searches for their violations, an automorphism trace for
//! edge pairs, a probabilistic density fingerprint, and the pipeline that
//! runs everything in order.
//!
//! The pipeline's verdicts are deliberately one-sided. A failed check or a
//! verified certificate refutes weak norming; passing everything proves
//! nothing, and the report says so.

mod falsify;

pub use falsify::{falsify_holder, falsify_lemma, SearchBudget};

use crate::density::{
    brute_force_density, brute_force_multilinear, density, edge_deleted_densities,
    multilinear_density, DensityError, EdgeAssignment, EvalMethod,
};
use crate::graph::{
    components_isomorphic, edge_orbits, find_isomorphism_where, part_degrees, Graph, GraphError,
    VertexMapping,
};
use crate::graphon::StepGraphon;
use crate::{rel_err, to_f64, tol, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum NormingError {
    #[error("kernel at slot {slot} has negative values; this check quantifies over nonnegative kernels")]
    SignedKernel { slot: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of the edge-version Hölder inequality
/// `t_G(h_1, ..., h_k)^k <= prod_l t_G(h_l)` on one assignment.
#[derive(Debug, Clone)]
pub struct HolderCheckResult<F> {
    /// `t_G(h_1, ..., h_k)^k`.
    pub lhs: F,
    /// `prod_l t_G(h_l)`.
    pub rhs: F,
    /// `rhs - lhs`; nonnegative when the inequality holds.
    pub margin: F,
    pub holds: bool,
}

/// Evaluates the Hölder inequality on a nonnegative assignment. Signed
/// kernels are rejected: the inequality quantifies over the nonnegative
/// class only.
pub fn holder_check<F: Real>(
    a: &EdgeAssignment<F>,
    tolerance: f64,
) -> Result<HolderCheckResult<F>, NormingError> {
    if let Some(slot) = a.kernels().iter().position(|k| !k.is_nonnegative()) {
        return Err(NormingError::SignedKernel { slot });
    }
    let k = a.graph().edge_count() as i32;
    let lhs = multilinear_density(a)?.value.powi(k);
    let mut rhs = F::one();
    for kernel in a.kernels() {
        rhs = rhs * density(a.graph(), kernel)?.value;
    }
    let margin = rhs - lhs;
    Ok(HolderCheckResult {
        lhs,
        rhs,
        margin,
        holds: to_f64(margin) >= -tolerance,
    })
}

/// Witness that the edge-deleted densities of a graph are unequal at some
/// nonnegative kernel, refuting weak norming.
#[derive(Debug, Clone)]
pub struct LemmaCertificate<F> {
    pub kernel: StepGraphon<F>,
    /// Edge whose deletion attains the smaller density.
    pub edge_lo: usize,
    /// Edge whose deletion attains the larger density.
    pub edge_hi: usize,
    pub t_lo: F,
    pub t_hi: F,
    /// `t_hi - t_lo`, strictly above the violation threshold.
    pub gap: F,
}

/// Compares all edge-deleted densities at `h`. Returns a certificate with
/// the extremal edges iff the spread exceeds `tolerance`.
pub fn lemma_equality_check<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
    tolerance: f64,
) -> Result<Option<LemmaCertificate<F>>, NormingError> {
    if !h.is_nonnegative() {
        return Err(NormingError::SignedKernel { slot: 0 });
    }
    if g.edge_count() < 2 {
        return Ok(None);
    }
    let values = edge_deleted_densities(g, h)?;
    Ok(certificate_from_deleted(h, &values, tolerance))
}

fn certificate_from_deleted<F: Real>(
    h: &StepGraphon<F>,
    values: &[F],
    tolerance: f64,
) -> Option<LemmaCertificate<F>> {
    let lo = (0..values.len()).min_by(|&a, &b| to_f64(values[a]).total_cmp(&to_f64(values[b])))?;
    let hi = (0..values.len()).max_by(|&a, &b| to_f64(values[a]).total_cmp(&to_f64(values[b])))?;
    let gap = values[hi] - values[lo];
    let scale = to_f64(values[hi]).abs().max(to_f64(values[lo]).abs());
    falsify::clears_threshold(to_f64(gap), tolerance, scale).then(|| LemmaCertificate {
        kernel: h.clone(),
        edge_lo: lo,
        edge_hi: hi,
        t_lo: values[lo],
        t_hi: values[hi],
        gap,
    })
}

/// Witness that the Hölder inequality fails at some nonnegative
/// assignment, refuting weak norming.
#[derive(Debug, Clone)]
pub struct HolderCertificate<F> {
    pub assignment: EdgeAssignment<F>,
    pub lhs: F,
    pub rhs: F,
    /// `lhs - rhs`, strictly above the violation threshold.
    pub violation: F,
}

/// Reference density: brute force whenever the guard allows it, bucket
/// elimination otherwise.
pub fn reference_density<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
) -> Result<(F, EvalMethod), DensityError> {
    match brute_force_density(g, h) {
        Ok(v) => Ok((v.value, EvalMethod::Oracle)),
        Err(DensityError::BruteForceGuard { .. }) => {
            density(g, h).map(|v| (v.value, EvalMethod::Contraction))
        }
        Err(e) => Err(e),
    }
}

fn reference_multilinear<F: Real>(a: &EdgeAssignment<F>) -> Result<(F, EvalMethod), DensityError> {
    match brute_force_multilinear(a) {
        Ok(v) => Ok((v.value, EvalMethod::Oracle)),
        Err(DensityError::BruteForceGuard { .. }) => {
            multilinear_density(a).map(|v| (v.value, EvalMethod::Contraction))
        }
        Err(e) => Err(e),
    }
}

/// Re-derives a lemma certificate from scratch and checks every claim.
pub fn verify_lemma_certificate<F: Real>(
    g: &Graph,
    cert: &LemmaCertificate<F>,
    rel: f64,
    threshold: f64,
) -> Result<(), String> {
    if !cert.kernel.is_nonnegative() {
        return Err("certificate kernel has negative values".into());
    }
    if cert.edge_lo == cert.edge_hi {
        return Err("certificate edges coincide".into());
    }
    for (claimed, edge, label) in [
        (cert.t_lo, cert.edge_lo, "t_lo"),
        (cert.t_hi, cert.edge_hi, "t_hi"),
    ] {
        let deleted = g
            .delete_edge(edge)
            .map_err(|e| format!("certificate edge invalid: {e}"))?;
        let (direct, _) =
            reference_density(&deleted, &cert.kernel).map_err(|e| e.to_string())?;
        if rel_err(to_f64(claimed), to_f64(direct)) > rel {
            return Err(format!(
                "{label} does not reproduce: claimed {claimed}, recomputed {direct}"
            ));
        }
        // The slot identity must hold too: one kernel at the deleted slot.
        let assignment =
            EdgeAssignment::uniform_with_slot(g.clone(), &cert.kernel, edge, &StepGraphon::one())
                .map_err(|e| e.to_string())?;
        let slot = multilinear_density(&assignment).map_err(|e| e.to_string())?.value;
        if rel_err(to_f64(claimed), to_f64(slot)) > rel {
            return Err(format!(
                "{label} slot identity fails: claimed {claimed}, slot form {slot}"
            ));
        }
    }
    let gap = to_f64(cert.t_hi) - to_f64(cert.t_lo);
    if (gap - to_f64(cert.gap)).abs() > rel * gap.abs().max(1.0) {
        return Err(format!("gap field inconsistent: {} vs {gap}", cert.gap));
    }
    let scale = to_f64(cert.t_hi).abs().max(to_f64(cert.t_lo).abs());
    if !falsify::clears_threshold(gap, threshold, scale) {
        return Err(format!(
            "gap {gap} does not exceed the threshold {threshold} at scale {scale}"
        ));
    }
    Ok(())
}

/// Re-derives a Hölder certificate from scratch and checks every claim.
pub fn verify_holder_certificate<F: Real>(
    g: &Graph,
    cert: &HolderCertificate<F>,
    rel: f64,
    threshold: f64,
) -> Result<(), String> {
    if cert.assignment.graph() != g {
        return Err("certificate is for a different graph".into());
    }
    if let Some(slot) = cert
        .assignment
        .kernels()
        .iter()
        .position(|k| !k.is_nonnegative())
    {
        return Err(format!("kernel {slot} has negative values"));
    }
    let k = g.edge_count() as i32;
    let (multi, _) = reference_multilinear(&cert.assignment).map_err(|e| e.to_string())?;
    let lhs = multi.powi(k);
    if rel_err(to_f64(lhs), to_f64(cert.lhs)) > rel {
        return Err(format!(
            "lhs does not reproduce: claimed {}, recomputed {lhs}",
            cert.lhs
        ));
    }
    let mut rhs = 1.0f64;
    for kernel in cert.assignment.kernels() {
        let (value, _) = reference_density(g, kernel).map_err(|e| e.to_string())?;
        rhs *= to_f64(value);
    }
    if rel_err(rhs, to_f64(cert.rhs)) > rel {
        return Err(format!(
            "rhs does not reproduce: claimed {}, recomputed {rhs}",
            cert.rhs
        ));
    }
    let violation = to_f64(lhs) - rhs;
    let scale = to_f64(lhs).abs().max(rhs.abs());
    if !falsify::clears_threshold(violation, threshold, scale) {
        return Err(format!(
            "violation {violation} does not exceed the threshold {threshold} at scale {scale}"
        ));
    }
    Ok(())
}

/// The automorphism trace behind edge-transitivity: an isomorphism of the
/// two edge-deleted subgraphs that maps one deleted edge onto the other,
/// with each claimed property rechecked independently.
#[derive(Debug, Clone)]
pub struct TheoremTrace {
    pub edge_i: usize,
    pub edge_j: usize,
    pub pi: VertexMapping,
    /// `pi` is an isomorphism from `g - e_i` to `g - e_j`.
    pub maps_deleted_subgraphs: bool,
    /// `pi` maps the endpoints of `e_i` onto the endpoints of `e_j`.
    pub maps_edge: bool,
    /// `pi` is an automorphism of `g` itself.
    pub is_automorphism: bool,
}

impl TheoremTrace {
    pub fn all_checks_hold(&self) -> bool {
        self.maps_deleted_subgraphs && self.maps_edge && self.is_automorphism
    }
}

/// Searches isomorphisms from `g - e_i` to `g - e_j` and returns the first
/// one mapping `e_i`'s endpoints onto `e_j`'s, rechecking all three trace
/// properties rather than assuming any implication between them.
///
/// Preconditions: connected, bipartite, both parts degree-regular, and
/// smaller part degree at least 2 (stars are edge-transitive outright and
/// have no use for the trace).
pub fn theorem_trace(
    g: &Graph,
    edge_i: usize,
    edge_j: usize,
) -> Result<Option<TheoremTrace>, NormingError> {
    if !g.is_connected() {
        return Err(NormingError::Precondition("graph must be connected".into()));
    }
    let bipartition = g
        .bipartition()
        .map_err(|_| NormingError::Precondition("graph must be bipartite".into()))?;
    let (a, _) = part_degrees(g, &bipartition).ok_or_else(|| {
        NormingError::Precondition("both parts must be degree-regular".into())
    })?;
    if a < 2 {
        return Err(NormingError::Precondition(format!(
            "smaller part degree is {a}, need at least 2 (stars bypass the trace)"
        )));
    }
    let pair_i = g.edge(edge_i)?;
    let pair_j = g.edge(edge_j)?;
    let deleted_i = g.delete_edge(edge_i)?;
    let deleted_j = g.delete_edge(edge_j)?;
    let found = find_isomorphism_where(&deleted_i, &deleted_j, |pi| {
        pi.apply_edge(pair_i) == pair_j
    });
    Ok(found.map(|pi| TheoremTrace {
        edge_i,
        edge_j,
        maps_deleted_subgraphs: pi.is_isomorphism(&deleted_i, &deleted_j),
        maps_edge: pi.apply_edge(pair_i) == pair_j,
        is_automorphism: pi.is_automorphism(g),
        pi,
    }))
}

/// One-sided probabilistic surrogate for density equality: compares the
/// two densities at seeded random nonnegative kernels. Graphs that are
/// isomorphic after dropping isolated vertices always agree;
/// non-isomorphic pairs are expected, not guaranteed, to differ.
pub fn density_fingerprint_equal(
    f: &Graph,
    g: &Graph,
    trials: usize,
    seed: u64,
) -> Result<bool, DensityError> {
    assert!(trials >= 1, "at least one trial");
    for trial in 0..trials {
        let h = StepGraphon::<f64>::random(
            3,
            0.0,
            1.0,
            seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15),
        )
        .expect("valid range");
        let a = density(f, &h)?.value;
        let b = density(g, &h)?.value;
        if (a - b).abs() > tol::FINGERPRINT {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of a single pipeline check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    /// Not run because an earlier check already settled the verdict.
    Skipped,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CheckOutcome::Pass)
    }

    pub fn label(&self) -> String {
        match self {
            CheckOutcome::Pass => "pass".into(),
            CheckOutcome::Fail(reason) => format!("fail ({reason})"),
            CheckOutcome::Skipped => "skipped".into(),
        }
    }
}

/// Final verdict. There is deliberately no positive "weakly norming"
/// verdict: the checks are necessary, never sufficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    NotWeaklyNorming { reason: String },
    PassesAllNecessaryConditions,
}

/// Caveat attached to every passing report.
pub const INSUFFICIENCY_CAVEAT: &str = "passing every necessary condition does not establish \
weak norming: toroidal grids C_2k x C_2k with k >= 3 pass all of these checks yet are known \
not weakly norming (Král', Martins, Pach, Wrochna 2019)";

/// Everything the pipeline learned about one graph.
#[derive(Debug, Clone)]
pub struct NormingReport<F> {
    pub graph6: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub components_isomorphic: CheckOutcome,
    pub bipartite: CheckOutcome,
    pub biregular: CheckOutcome,
    /// Common part degrees `(a, b)`, `a <= b`, when biregular.
    pub part_degrees: Option<(usize, usize)>,
    pub edge_transitive: CheckOutcome,
    pub edge_orbit_count: Option<usize>,
    /// Whether the budgeted falsifiers were reached.
    pub falsifiers_ran: bool,
    pub lemma_certificate: Option<LemmaCertificate<F>>,
    pub holder_certificate: Option<HolderCertificate<F>>,
    /// Set whenever a falsifier certificate coexists with a clean
    /// structural pass. A lemma gap on an edge-transitive graph can only
    /// be an implementation fault (symmetry forces equality); a Hölder
    /// violation is a genuine refutation the structural checks cannot see.
    pub unexpected_certificate: Option<String>,
    pub verdict: Verdict,
    /// Present on every passing verdict.
    pub caveat: Option<&'static str>,
}

impl<F> NormingReport<F> {
    pub fn passes(&self) -> bool {
        matches!(self.verdict, Verdict::PassesAllNecessaryConditions)
    }
}

/// Runs the necessary conditions in order — component isomorphism,
/// bipartiteness, biregularity, edge-transitivity — short-circuiting to a
/// refutation at the first structural failure, then spends the search
/// budget on the lemma and Hölder falsifiers.
pub fn necessary_conditions_pipeline<F: Real>(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<NormingReport<F>, NormingError> {
    let mut report = NormingReport {
        graph6: g.to_graph6(),
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        components_isomorphic: CheckOutcome::Skipped,
        bipartite: CheckOutcome::Skipped,
        biregular: CheckOutcome::Skipped,
        part_degrees: None,
        edge_transitive: CheckOutcome::Skipped,
        edge_orbit_count: None,
        falsifiers_ran: false,
        lemma_certificate: None,
        holder_certificate: None,
        unexpected_certificate: None,
        verdict: Verdict::PassesAllNecessaryConditions,
        caveat: None,
    };

    let components = components_isomorphic(g);
    if components.all_isomorphic() {
        report.components_isomorphic = CheckOutcome::Pass;
    } else {
        let reason = format!(
            "the {} non-singleton components are not pairwise isomorphic",
            components.components.len()
        );
        report.components_isomorphic = CheckOutcome::Fail(reason.clone());
        report.verdict = Verdict::NotWeaklyNorming { reason };
        return Ok(report);
    }

    let bipartition = match g.bipartition() {
        Ok(b) => {
            report.bipartite = CheckOutcome::Pass;
            b
        }
        Err(walk) => {
            let reason = format!(
                "not bipartite: odd closed walk through vertices {:?}",
                walk.vertices
            );
            report.bipartite = CheckOutcome::Fail(reason.clone());
            report.verdict = Verdict::NotWeaklyNorming { reason };
            return Ok(report);
        }
    };

    let degrees = match part_degrees(g, &bipartition) {
        Some(pair) => {
            report.biregular = CheckOutcome::Pass;
            report.part_degrees = Some(pair);
            pair
        }
        None => {
            let reason = "vertices within one part have differing degrees".to_string();
            report.biregular = CheckOutcome::Fail(reason.clone());
            report.verdict = Verdict::NotWeaklyNorming { reason };
            return Ok(report);
        }
    };

    // Connected graphs with smaller part degree 1 are stars; they are
    // edge-transitive outright and need no group enumeration.
    if degrees.0 == 1 && g.is_connected() {
        report.edge_transitive = CheckOutcome::Pass;
        report.edge_orbit_count = Some(usize::from(g.edge_count() > 0));
    } else {
        let orbits = edge_orbits(g)?;
        report.edge_orbit_count = Some(orbits.orbit_count());
        if orbits.orbit_count() <= 1 {
            report.edge_transitive = CheckOutcome::Pass;
        } else {
            let reason = format!(
                "not edge-transitive: edges fall into {} orbits {:?}",
                orbits.orbit_count(),
                orbits.orbits()
            );
            report.edge_transitive = CheckOutcome::Fail(reason.clone());
            report.verdict = Verdict::NotWeaklyNorming { reason };
            return Ok(report);
        }
    }

    report.falsifiers_ran = true;
    if let Some(cert) = falsify_lemma::<F>(g, budget)? {
        let reason = format!(
            "edge-deleted densities differ: gap {} between edges {} and {}",
            cert.gap, cert.edge_hi, cert.edge_lo
        );
        // Edge-transitivity makes all edge-deleted densities equal by
        // relabeling the integral, so this can only be a fault in the
        // implementation.
        report.unexpected_certificate = Some(
            "lemma gap found on an edge-transitive graph; symmetry forces equality, \
             so one of the two computations is wrong"
                .into(),
        );
        report.lemma_certificate = Some(cert);
        report.verdict = Verdict::NotWeaklyNorming { reason };
        return Ok(report);
    }

    if let Some(cert) = falsify_holder::<F>(g, budget)? {
        let reason = format!(
            "Hölder inequality violated: lhs {} exceeds rhs {} by {}",
            cert.lhs, cert.rhs, cert.violation
        );
        report.unexpected_certificate = Some(
            "Hölder violation found although every structural necessary condition \
             passed; the certificate alone refutes weak norming"
                .into(),
        );
        report.holder_certificate = Some(cert);
        report.verdict = Verdict::NotWeaklyNorming { reason };
        return Ok(report);
    }

    report.verdict = Verdict::PassesAllNecessaryConditions;
    report.caveat = Some(INSUFFICIENCY_CAVEAT);
    Ok(report)
}

/// Seeded random kernels reused by callers that probe Hölder positivity.
pub fn random_nonnegative_assignment<F: Real>(
    g: &Graph,
    q: usize,
    seed: u64,
) -> Result<EdgeAssignment<F>, DensityError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kernels = (0..g.edge_count())
        .map(|_| StepGraphon::random(q, F::zero(), F::one(), rng.gen()).expect("valid range"))
        .collect();
    EdgeAssignment::new(g.clone(), kernels)
}
