//! Budgeted certificate searches: seeded restarts followed by projected
//! coordinate ascent. Serial and deterministic for a fixed seed; the
//! certificate returned always comes from the lowest restart index that
//! clears the violation threshold.

use super::{certificate_from_deleted, HolderCertificate, LemmaCertificate, NormingError};
use crate::density::{
    edge_deleted_densities, multilinear_density, plan_contraction, EdgeAssignment,
};
use crate::graph::Graph;
use crate::graphon::StepGraphon;
use crate::{real, to_f64, tol, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Budget and knobs for the falsifier searches. The default violation
/// threshold assumes double-precision evaluation; single-precision
/// callers should widen it to clear the larger rounding noise.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    /// Independent seeded starts.
    pub restarts: u32,
    /// Objective evaluations allowed per restart.
    pub steps: u32,
    /// Block counts cycled across restarts.
    pub block_counts: Vec<usize>,
    /// Projection clamps kernel values to `[0, value_cap]`.
    pub value_cap: f64,
    pub seed: u64,
    /// Violations below this are noise, not certificates.
    pub violation_threshold: f64,
    /// Optional global cap on objective evaluations across all restarts.
    pub max_total_evals: Option<u64>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            restarts: 50,
            steps: 500,
            block_counts: vec![2, 3],
            value_cap: 4.0,
            seed: 0,
            violation_threshold: tol::VIOLATION,
            max_total_evals: None,
        }
    }
}

impl SearchBudget {
    /// Default budget scaled to the graph: expensive contractions get a
    /// global evaluation cap so a pipeline run stays interactive. The cap
    /// is derived from the contraction plan, so it is deterministic.
    pub fn auto_for(g: &Graph) -> Self {
        let mut budget = Self::default();
        let per_eval = |q: usize| {
            plan_contraction(g, q)
                .cost_estimate
                .saturating_mul(g.edge_count() as u128 + 1)
        };
        // Drop block counts whose single evaluation is already over the
        // per-eval ceiling.
        budget.block_counts.retain(|&q| per_eval(q) <= 50_000_000);
        if budget.block_counts.is_empty() {
            budget.block_counts = vec![2];
        }
        let cheapest = budget
            .block_counts
            .iter()
            .map(|&q| per_eval(q))
            .min()
            .unwrap_or(1)
            .max(1);
        let cap = (200_000_000u128 / cheapest).clamp(60, 25_000) as u64;
        let full = u64::from(budget.restarts) * u64::from(budget.steps);
        if cap < full {
            budget.max_total_evals = Some(cap);
        }
        budget
    }

    fn restart_seed(&self, restart: u32) -> u64 {
        self.seed ^ u64::from(restart).wrapping_mul(0x9e37_79b9_7f4a_7c15)
    }
}

/// Counts objective evaluations against the per-restart and global caps.
struct EvalBudget {
    per_restart: u32,
    used_in_restart: u32,
    total_cap: Option<u64>,
    total_used: u64,
}

impl EvalBudget {
    fn start_restart(&mut self) {
        self.used_in_restart = 0;
    }

    fn take(&mut self) -> bool {
        if self.used_in_restart >= self.per_restart {
            return false;
        }
        if let Some(cap) = self.total_cap {
            if self.total_used >= cap {
                return false;
            }
        }
        self.used_in_restart += 1;
        self.total_used += 1;
        true
    }

    fn exhausted_globally(&self) -> bool {
        self.total_cap.is_some_and(|cap| self.total_used >= cap)
    }
}

/// The symmetric coordinates of a `q x q` matrix: pairs `(a, b)`, `a <= b`.
fn coordinates(q: usize) -> Vec<(usize, usize)> {
    (0..q)
        .flat_map(|a| (a..q).map(move |b| (a, b)))
        .collect()
}

/// Violation acceptance, relative to the magnitude of the quantities
/// involved. At unit scale this is the plain absolute threshold; above it,
/// an absolute test would accept pure rounding noise, since the per-edge
/// contractions of a large graph agree only to machine precision times the
/// density's magnitude.
pub(super) fn clears_threshold(difference: f64, threshold: f64, scale: f64) -> bool {
    difference.is_finite() && difference > threshold * scale.abs().max(1.0)
}

fn set_entry<F: Real>(h: &StepGraphon<F>, a: usize, b: usize, value: F) -> StepGraphon<F> {
    let q = h.block_count();
    let mut values = h.values().to_vec();
    values[a * q + b] = value;
    values[b * q + a] = value;
    StepGraphon::new_unchecked(h.weights().to_vec(), values)
}

/// Searches for a nonnegative kernel with unequal edge-deleted densities.
/// Random restarts, then coordinate-wise hill climbing that maximizes the
/// spread; returns the certificate from the first restart whose best gap
/// exceeds the threshold.
pub fn falsify_lemma<F: Real>(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<Option<LemmaCertificate<F>>, NormingError> {
    if g.edge_count() < 2 {
        return Ok(None);
    }
    let cap = real::<F>(budget.value_cap);
    let mut evals = EvalBudget {
        per_restart: budget.steps.max(1),
        used_in_restart: 0,
        total_cap: budget.max_total_evals,
        total_used: 0,
    };
    // The objective is the spread relative to the density magnitude, so
    // the climb cannot profit from inflating the overall scale.
    let gap_of = |h: &StepGraphon<F>| -> Result<(f64, Vec<F>), NormingError> {
        let values = edge_deleted_densities(g, h)?;
        let (lo, hi) = values
            .iter()
            .map(|&v| to_f64(v))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if !lo.is_finite() || !hi.is_finite() {
            return Ok((f64::NEG_INFINITY, values));
        }
        Ok(((hi - lo) / hi.abs().max(lo.abs()).max(1.0), values))
    };

    for restart in 0..budget.restarts {
        if evals.exhausted_globally() {
            break;
        }
        evals.start_restart();
        let q = budget.block_counts[restart as usize % budget.block_counts.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(budget.restart_seed(restart));
        let hi = budget.value_cap.min(1.0);
        let mut h = StepGraphon::<F>::random(q, F::zero(), real(hi), rng.gen())
            .expect("range is valid");
        if !evals.take() {
            continue;
        }
        let (mut best_gap, _) = gap_of(&h)?;

        // Coordinate-wise hill climbing with a halving step size.
        let coords = coordinates(q);
        let mut delta = budget.value_cap / 8.0;
        while delta >= 1e-3 {
            let mut improved = false;
            'sweep: for &(a, b) in &coords {
                for sign in [1.0, -1.0] {
                    let current = to_f64(h.value(a, b));
                    let proposed = (current + sign * delta).clamp(0.0, budget.value_cap);
                    if proposed == current {
                        continue;
                    }
                    let candidate = set_entry(&h, a, b, real::<F>(proposed).min(cap));
                    if !evals.take() {
                        break 'sweep;
                    }
                    let (gap, _) = gap_of(&candidate)?;
                    if gap > best_gap {
                        best_gap = gap;
                        h = candidate;
                        improved = true;
                    }
                }
            }
            if !improved {
                delta /= 2.0;
            }
            if evals.used_in_restart >= evals.per_restart || evals.exhausted_globally() {
                break;
            }
        }

        if best_gap > budget.violation_threshold {
            let (_, values) = gap_of(&h)?;
            let cert = certificate_from_deleted(&h, &values, budget.violation_threshold);
            if cert.is_some() {
                return Ok(cert);
            }
        }
    }
    Ok(None)
}

/// Structured starting assignments: a scaled bipartite pattern padded with
/// constant ones (the analytic witness family for non-bipartite graphs),
/// the flat all-ones assignment, and the all-bipartite assignment.
fn structured_seed<F: Real>(g: &Graph, index: u32, value_cap: f64) -> Option<EdgeAssignment<F>> {
    let c = real::<F>(value_cap.min(2.0));
    let zero = F::zero();
    let half = real::<F>(0.5);
    let pattern = StepGraphon::new_unchecked(vec![half, half], vec![zero, c, c, zero]);
    let one = StepGraphon::one();
    let kernels: Vec<StepGraphon<F>> = match index {
        0 => {
            let mut kernels = vec![one; g.edge_count()];
            kernels[0] = pattern;
            kernels
        }
        1 => vec![one; g.edge_count()],
        2 => vec![pattern; g.edge_count()],
        _ => return None,
    };
    Some(EdgeAssignment::new(g.clone(), kernels).expect("kernel count matches"))
}

/// Searches for a nonnegative edge assignment violating the Hölder
/// inequality. Structured seeds come first, then random assignments;
/// projected coordinate ascent maximizes `log lhs - log rhs`.
pub fn falsify_holder<F: Real>(
    g: &Graph,
    budget: &SearchBudget,
) -> Result<Option<HolderCertificate<F>>, NormingError> {
    let k = g.edge_count();
    if k == 0 {
        return Ok(None);
    }
    let mut evals = EvalBudget {
        per_restart: budget.steps.max(1),
        used_in_restart: 0,
        total_cap: budget.max_total_evals,
        total_used: 0,
    };

    // Score, violation, and parts for one assignment. Assignments whose
    // sides leave the representable range score negative infinity, so the
    // ascent never moves there and never certifies an overflowed value.
    struct Eval {
        score: f64,
        accepted: bool,
        lhs: f64,
        rhs: f64,
    }
    let evaluate = |a: &EdgeAssignment<F>| -> Result<Eval, NormingError> {
        let multi = to_f64(multilinear_density(a)?.value);
        let mut rhs = 1.0f64;
        let mut log_rhs = 0.0f64;
        for kernel in a.kernels() {
            let value = to_f64(crate::density::density(g, kernel)?.value);
            rhs *= value;
            log_rhs += value.max(1e-300).ln();
        }
        let lhs = multi.powi(k as i32);
        if !lhs.is_finite() || !rhs.is_finite() {
            return Ok(Eval {
                score: f64::NEG_INFINITY,
                accepted: false,
                lhs,
                rhs,
            });
        }
        Ok(Eval {
            score: k as f64 * multi.max(1e-300).ln() - log_rhs,
            accepted: clears_threshold(
                lhs - rhs,
                budget.violation_threshold,
                lhs.abs().max(rhs.abs()),
            ),
            lhs,
            rhs,
        })
    };

    for restart in 0..budget.restarts {
        if evals.exhausted_globally() {
            break;
        }
        evals.start_restart();
        let mut assignment = match structured_seed(g, restart, budget.value_cap) {
            Some(seeded) => seeded,
            None => {
                let q = budget.block_counts[restart as usize % budget.block_counts.len()];
                let mut rng = ChaCha8Rng::seed_from_u64(budget.restart_seed(restart));
                let hi = budget.value_cap.min(1.0);
                let kernels = (0..k)
                    .map(|_| {
                        StepGraphon::<F>::random(q, F::zero(), real(hi), rng.gen())
                            .expect("range is valid")
                    })
                    .collect();
                EdgeAssignment::new(g.clone(), kernels).expect("kernel count matches")
            }
        };
        if !evals.take() {
            continue;
        }
        let mut best = evaluate(&assignment)?;

        let q = assignment.block_count();
        let coords = coordinates(q);
        let mut delta = budget.value_cap / 8.0;
        while delta >= 1e-3 {
            let mut improved = false;
            'sweep: for slot in 0..k {
                for &(a, b) in &coords {
                    for sign in [1.0, -1.0] {
                        let kernel = &assignment.kernels()[slot];
                        let current = to_f64(kernel.value(a, b));
                        let proposed = (current + sign * delta).clamp(0.0, budget.value_cap);
                        if proposed == current {
                            continue;
                        }
                        let mut kernels = assignment.kernels().to_vec();
                        kernels[slot] = set_entry(kernel, a, b, real(proposed));
                        let candidate = EdgeAssignment::new(g.clone(), kernels)
                            .expect("kernel count matches");
                        if !evals.take() {
                            break 'sweep;
                        }
                        let eval = evaluate(&candidate)?;
                        if eval.score > best.score {
                            best = eval;
                            assignment = candidate;
                            improved = true;
                        }
                    }
                }
            }
            if !improved {
                delta /= 2.0;
            }
            if evals.used_in_restart >= evals.per_restart || evals.exhausted_globally() {
                break;
            }
        }

        if best.accepted {
            return Ok(Some(HolderCertificate {
                assignment,
                lhs: real(best.lhs),
                rhs: real(best.rhs),
                violation: real(best.lhs - best.rhs),
            }));
        }
    }
    Ok(None)
}
