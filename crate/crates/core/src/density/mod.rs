//! Exact evaluation of homomorphism densities of a graph into step
//! graphons: a brute-force reference path that enumerates all block maps,
//! and a bucket-elimination path that contracts factors along a min-fill
//! vertex order. Also the edge-deleted densities and the first-order
//! perturbation coefficients built on the multilinear form.

mod contract;

pub use contract::{induced_width_of_order, plan_contraction, ContractionPlan};

use crate::graph::Graph;
use crate::graphon::{common_refinement, GraphonError, StepGraphon};
use crate::{to_f64, tol, CompensatedSum, Real};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DensityError {
    #[error("brute force refused: {states:.3e} block maps exceed the guard of {guard:.1e}")]
    BruteForceGuard { states: f64, guard: f64 },
    #[error(
        "contraction at induced width {width} needs {needed} table entries, over the budget of {budget}"
    )]
    TableBudget {
        width: usize,
        needed: u128,
        budget: u64,
    },
    #[error("edge assignment needs {expected} kernels, got {got}")]
    KernelCount { expected: usize, got: usize },
    #[error("perturbed edge slots must differ")]
    SameSlot,
    #[error("edge index {index} out of range ({edge_count} edges)")]
    EdgeIndex { index: usize, edge_count: usize },
    #[error(transparent)]
    Graphon(#[from] GraphonError),
}

/// How a density value was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMethod {
    Oracle,
    Contraction,
}

impl std::fmt::Display for EvalMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalMethod::Oracle => write!(f, "oracle"),
            EvalMethod::Contraction => write!(f, "contraction"),
        }
    }
}

/// A computed density together with its provenance.
#[derive(Debug, Clone)]
pub struct DensityValue<F> {
    pub value: F,
    pub method: EvalMethod,
    pub plan: Option<ContractionPlan>,
}

/// Evaluation knobs shared by both paths.
#[derive(Debug, Clone)]
pub struct EvalOptions {
    /// Maximum table entries a single contraction factor may hold.
    pub table_budget: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            table_budget: tol::TABLE_BUDGET,
        }
    }
}

/// One kernel per edge, all re-expressed on a single shared partition at
/// construction.
#[derive(Debug, Clone)]
pub struct EdgeAssignment<F> {
    graph: Graph,
    kernels: Vec<StepGraphon<F>>,
}

impl<F: Real> EdgeAssignment<F> {
    pub fn new(graph: Graph, kernels: Vec<StepGraphon<F>>) -> Result<Self, DensityError> {
        if kernels.len() != graph.edge_count() {
            return Err(DensityError::KernelCount {
                expected: graph.edge_count(),
                got: kernels.len(),
            });
        }
        let kernels = if kernels.is_empty() {
            kernels
        } else {
            common_refinement(&kernels)
        };
        Ok(Self { graph, kernels })
    }

    /// Every edge carries the same kernel.
    pub fn uniform(graph: Graph, h: &StepGraphon<F>) -> Self {
        let kernels = vec![h.clone(); graph.edge_count()];
        Self { graph, kernels }
    }

    /// The same kernel everywhere except one slot.
    pub fn uniform_with_slot(
        graph: Graph,
        h: &StepGraphon<F>,
        slot: usize,
        replacement: &StepGraphon<F>,
    ) -> Result<Self, DensityError> {
        if slot >= graph.edge_count() {
            return Err(DensityError::EdgeIndex {
                index: slot,
                edge_count: graph.edge_count(),
            });
        }
        let mut kernels = vec![h.clone(); graph.edge_count()];
        kernels[slot] = replacement.clone();
        Self::new(graph, kernels)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn kernels(&self) -> &[StepGraphon<F>] {
        &self.kernels
    }

    pub fn block_count(&self) -> usize {
        self.kernels.first().map_or(1, StepGraphon::block_count)
    }

    fn shared_weights(&self) -> &[F] {
        self.kernels
            .first()
            .map_or(&[], |k| k.weights())
    }
}

/// Enumerates every map from vertices to blocks and sums the weighted edge
/// products with compensated summation. Refuses when the state count
/// exceeds the guard.
pub fn brute_force_density<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
) -> Result<DensityValue<F>, DensityError> {
    let kernels: Vec<&StepGraphon<F>> = vec![h; g.edge_count()];
    let value = brute_force_sum(g, h.weights(), &kernels)?;
    Ok(DensityValue {
        value,
        method: EvalMethod::Oracle,
        plan: None,
    })
}

/// Brute-force evaluation of the multilinear form.
pub fn brute_force_multilinear<F: Real>(
    a: &EdgeAssignment<F>,
) -> Result<DensityValue<F>, DensityError> {
    if a.kernels.is_empty() {
        return Ok(DensityValue {
            value: F::one(),
            method: EvalMethod::Oracle,
            plan: None,
        });
    }
    let kernels: Vec<&StepGraphon<F>> = a.kernels.iter().collect();
    let value = brute_force_sum(&a.graph, a.shared_weights(), &kernels)?;
    Ok(DensityValue {
        value,
        method: EvalMethod::Oracle,
        plan: None,
    })
}

fn brute_force_sum<F: Real>(
    g: &Graph,
    weights: &[F],
    kernels: &[&StepGraphon<F>],
) -> Result<F, DensityError> {
    let n = g.vertex_count();
    let q = weights.len().max(1);
    let states = (q as f64).powi(n as i32);
    if states > tol::BRUTE_FORCE_STATES {
        return Err(DensityError::BruteForceGuard {
            states,
            guard: tol::BRUTE_FORCE_STATES,
        });
    }
    if n == 0 {
        return Ok(F::one());
    }
    let mut assignment = vec![0usize; n];
    let mut acc = CompensatedSum::new();
    loop {
        let mut term = F::one();
        for &block in &assignment {
            term = term * weights[block];
        }
        for (l, &(i, j)) in g.edges().iter().enumerate() {
            term = term * kernels[l].value(assignment[i], assignment[j]);
        }
        acc.add(term);
        // Mixed-radix increment, most significant digit last.
        let mut digit = 0;
        loop {
            if digit == n {
                return Ok(acc.value());
            }
            assignment[digit] += 1;
            if assignment[digit] < q {
                break;
            }
            assignment[digit] = 0;
            digit += 1;
        }
    }
}

/// Density via bucket elimination along the min-fill plan. Vertex weights
/// fold into each vertex's own elimination step.
pub fn density<F: Real>(g: &Graph, h: &StepGraphon<F>) -> Result<DensityValue<F>, DensityError> {
    density_with(g, h, &EvalOptions::default())
}

pub fn density_with<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
    options: &EvalOptions,
) -> Result<DensityValue<F>, DensityError> {
    let kernels: Vec<&StepGraphon<F>> = vec![h; g.edge_count()];
    contract::contract(g, h.weights(), &kernels, options)
}

/// The multilinear form `t_G(h_1, ..., h_k)` via bucket elimination. With
/// every slot equal to `h` this reproduces `density(g, h)`.
pub fn multilinear_density<F: Real>(
    a: &EdgeAssignment<F>,
) -> Result<DensityValue<F>, DensityError> {
    multilinear_density_with(a, &EvalOptions::default())
}

pub fn multilinear_density_with<F: Real>(
    a: &EdgeAssignment<F>,
    options: &EvalOptions,
) -> Result<DensityValue<F>, DensityError> {
    if a.kernels.is_empty() {
        return contract::contract(&a.graph, &[F::one()], &[], options);
    }
    let kernels: Vec<&StepGraphon<F>> = a.kernels.iter().collect();
    contract::contract(&a.graph, a.shared_weights(), &kernels, options)
}

/// The edge-deleted densities `t_l`: the multilinear form with the
/// constant one kernel in slot `l`. Equals the density of the graph with
/// edge `l` removed, since the freed variables integrate to one.
pub fn edge_deleted_densities<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
) -> Result<Vec<F>, DensityError> {
    edge_deleted_densities_with(g, h, &EvalOptions::default())
}

pub fn edge_deleted_densities_with<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
    options: &EvalOptions,
) -> Result<Vec<F>, DensityError> {
    let one = StepGraphon::one();
    (0..g.edge_count())
        .map(|l| {
            let assignment = EdgeAssignment::uniform_with_slot(g.clone(), h, l, &one)?;
            Ok(multilinear_density_with(&assignment, options)?.value)
        })
        .collect()
}

/// The exact first-order coefficient of `eps -> t_G(h + eps)`: the sum of
/// all edge-deleted densities. Central finite differences of the shifted
/// density converge to this value at second order.
pub fn uniform_direction_derivative<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
) -> Result<F, DensityError> {
    let acc: CompensatedSum<F> = edge_deleted_densities(g, h)?.into_iter().collect();
    Ok(acc.value())
}

/// The multilinear form with `h + eps` in slot `lo` and `h - eps` in slot
/// `hi`. Its first-order coefficient in `eps` is `t_lo - t_hi`. Callers
/// that need both perturbed kernels nonnegative must keep `|eps|` within
/// the kernel's separation from zero.
pub fn perturbed_pair_density<F: Real>(
    g: &Graph,
    h: &StepGraphon<F>,
    eps: F,
    lo: usize,
    hi: usize,
) -> Result<F, DensityError> {
    if lo == hi {
        return Err(DensityError::SameSlot);
    }
    for index in [lo, hi] {
        if index >= g.edge_count() {
            return Err(DensityError::EdgeIndex {
                index,
                edge_count: g.edge_count(),
            });
        }
    }
    let mut kernels = vec![h.clone(); g.edge_count()];
    kernels[lo] = h.shift(eps);
    kernels[hi] = h.shift(-eps);
    let assignment = EdgeAssignment::new(g.clone(), kernels)?;
    Ok(multilinear_density(&assignment)?.value)
}

/// Scale-aware agreement check used throughout the tests: absolute error
/// relative to `max(1, |a|, |b|)`.
pub fn values_agree<F: Real>(a: F, b: F, rel: f64) -> bool {
    crate::rel_err(to_f64(a), to_f64(b)) <= rel
}

#[cfg(test)]
mod tests;
