//! Seeded property suites: oracle equivalence, normalization, the
//! multilinear and edge-deleted identities, derivative convergence, and
//! relabeling symmetry. The command line's `selftest` reruns exactly these,
//! so library tests and the shipped binary agree on what is checked.

use crate::catalog;
use crate::density::{
    brute_force_density, brute_force_multilinear, density, edge_deleted_densities,
    multilinear_density, perturbed_pair_density, uniform_direction_derivative, EdgeAssignment,
};
use crate::graph::{edge_orbits, Graph};
use crate::graphon::StepGraphon;
use crate::{rel_err, tol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one suite run: failure descriptions and the worst observed
/// discrepancy (interpretation depends on the suite).
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: Vec<String>,
    pub worst: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn human_line(&self) -> String {
        format!(
            "suite {}: {} trials, {} failures, worst {:.3e}",
            self.name,
            self.trials,
            self.failures.len(),
            self.worst
        )
    }
}

fn case_seed(base: u64, index: u64) -> u64 {
    base ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Erdős–Rényi-style seeded graph: each pair joins independently with
/// probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("generated pairs are simple")
}

/// A seeded `(graph, kernel)` pair: `2..=n_max` vertices, edge probability
/// in `[0.25, 0.75]`, kernel with `1..=q_max` blocks and values in
/// `[lo, hi]`.
pub fn random_pair(seed: u64, n_max: usize, q_max: usize, lo: f64, hi: f64) -> (Graph, StepGraphon<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed(seed, 0xA11CE));
    let n = rng.gen_range(2..=n_max);
    let p = rng.gen_range(0.25..0.75);
    let q = rng.gen_range(1..=q_max);
    let graph = random_graph(n, p, rng.gen());
    let kernel = StepGraphon::random(q, lo, hi, rng.gen()).expect("valid range");
    (graph, kernel)
}

/// A seeded permutation of `0..n` (Fisher–Yates).
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Contraction equals brute force on seeded random pairs, within the
/// oracle tolerance relative to `max(1, |value|)`.
pub fn oracle_equivalence_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..trials {
        let (g, h) = random_pair(case_seed(seed, case as u64), 8, 3, -1.0, 2.0);
        let brute = brute_force_density(&g, &h).expect("guard holds at this scale");
        let fast = density(&g, &h).expect("width is small at this scale");
        let err = rel_err(fast.value, brute.value);
        worst = worst.max(err);
        if err > tol::ORACLE_REL {
            failures.push(format!(
                "case {case}: contraction {} vs oracle {} (rel {err:.3e})",
                fast.value, brute.value
            ));
        }
    }
    SuiteOutcome {
        name: "oracle_equivalence",
        trials,
        failures,
        worst,
    }
}

/// `t_G(1) = 1` for every catalog entry, including the toroidal grid.
pub fn normalization_suite() -> SuiteOutcome {
    let entries = catalog::listing();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for entry in &entries {
        let value = density(&entry.graph, &StepGraphon::<f64>::one())
            .expect("catalog graphs fit the default budget")
            .value;
        let err = (value - 1.0).abs();
        worst = worst.max(err);
        if err > tol::NORMALIZATION {
            failures.push(format!("{}: t(1) = {value}", entry.name));
        }
    }
    SuiteOutcome {
        name: "normalization",
        trials: entries.len(),
        failures,
        worst,
    }
}

/// All-equal edge assignments reproduce the plain density; a brute-force
/// crosscheck guards the multilinear path itself.
pub fn multilinear_identity_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..trials {
        let (g, h) = random_pair(case_seed(seed.wrapping_add(101), case as u64), 8, 3, -1.0, 2.0);
        let assignment = EdgeAssignment::uniform(g.clone(), &h);
        let multi = multilinear_density(&assignment).expect("small width").value;
        let plain = density(&g, &h).expect("small width").value;
        let brute = brute_force_multilinear(&assignment).expect("small").value;
        let err = rel_err(multi, plain).max(rel_err(multi, brute));
        worst = worst.max(err);
        if err > 1e-12 {
            failures.push(format!("case {case}: {multi} vs {plain} / {brute}"));
        }
    }
    SuiteOutcome {
        name: "multilinear_identity",
        trials,
        failures,
        worst,
    }
}

/// The one-slot identity: the multilinear form with the constant one at
/// slot `l` equals the density of the graph without edge `l`, on both code
/// paths.
pub fn edge_deleted_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut case = 0u64;
    let mut done = 0;
    while done < trials {
        let (g, h) = random_pair(case_seed(seed.wrapping_add(202), case), 7, 3, 0.0, 1.5);
        case += 1;
        if g.edge_count() == 0 {
            continue;
        }
        done += 1;
        let slots = edge_deleted_densities(&g, &h).expect("small width");
        for (l, &t) in slots.iter().enumerate() {
            let deleted = g.delete_edge(l).expect("index in range");
            let fast = density(&deleted, &h).expect("small width").value;
            let brute = brute_force_density(&deleted, &h).expect("small").value;
            let err = rel_err(t, fast).max(rel_err(t, brute));
            worst = worst.max(err);
            if err > tol::EDGE_DELETED_REL {
                failures.push(format!("case {done} edge {l}: slot {t} vs deleted {fast}/{brute}"));
            }
        }
    }
    SuiteOutcome {
        name: "edge_deleted_identity",
        trials,
        failures,
        worst,
    }
}

/// First-order expansion checks. For the uniform shift, the central
/// difference converges to the sum of edge-deleted densities at second
/// order. For the opposed pair shift, the central difference equals
/// `t_lo - t_hi` up to roundoff and the expansion remainder is exactly
/// quadratic; the remainder's decay carries the order check there.
pub fn derivative_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut case = 0u64;
    let mut done = 0;
    while done < trials {
        let (g, h) = random_pair(case_seed(seed.wrapping_add(303), case), 6, 3, 0.5, 1.5);
        case += 1;
        let k = g.edge_count();
        // Need a cubic term for the order check, and few enough edges that
        // the quadratic remainder stays far above the rounding floor.
        if !(3..=9).contains(&k) {
            continue;
        }
        done += 1;

        let exact_sum = uniform_direction_derivative(&g, &h).expect("small width");
        let central = |eps: f64| {
            let plus = density(&g, &h.shift(eps)).expect("small").value;
            let minus = density(&g, &h.shift(-eps)).expect("small").value;
            (plus - minus) / (2.0 * eps)
        };
        let err3 = (central(1e-3) - exact_sum).abs();
        let err4 = (central(1e-4) - exact_sum).abs();
        let slope = (err3 / err4).log10();
        if (slope - 2.0).abs() > 0.3 {
            failures.push(format!(
                "case {done}: uniform-shift slope {slope:.3} (errors {err3:.3e}, {err4:.3e})"
            ));
        }
        worst = worst.max((slope - 2.0).abs());
        if err4 > 1e-3 * exact_sum.abs().max(1.0) {
            failures.push(format!("case {done}: central difference {err4:.3e} off the sum"));
        }

        // Extremal pair of edge-deleted densities.
        let t = edge_deleted_densities(&g, &h).expect("small width");
        let lo = (0..k).max_by(|&a, &b| t[a].total_cmp(&t[b])).expect("k >= 3");
        let hi = (0..k).min_by(|&a, &b| t[a].total_cmp(&t[b])).expect("k >= 3");
        let (lo, hi) = if lo == hi { (0, 1) } else { (lo, hi) };
        let exact_pair = t[lo] - t[hi];
        let base = density(&g, &h).expect("small").value;
        let perturbed = |eps: f64| perturbed_pair_density(&g, &h, eps, lo, hi).expect("slots ok");
        let cd_pair = (perturbed(1e-4) - perturbed(-1e-4)) / (2.0 * 1e-4);
        let cd_err = (cd_pair - exact_pair).abs();
        worst = worst.max(cd_err);
        if cd_err > 1e-9 * exact_pair.abs().max(1.0) {
            failures.push(format!("case {done}: pair slope {cd_pair} vs {exact_pair}"));
        }
        let remainder = |eps: f64| (perturbed(eps) - base - exact_pair * eps).abs();
        let r3 = remainder(1e-3);
        let r4 = remainder(1e-4);
        let pair_slope = (r3 / r4).log10();
        if (pair_slope - 2.0).abs() > 0.3 {
            failures.push(format!(
                "case {done}: pair remainder slope {pair_slope:.3} ({r3:.3e}, {r4:.3e})"
            ));
        }
    }
    SuiteOutcome {
        name: "derivative_expansions",
        trials,
        failures,
        worst,
    }
}

/// Densities are invariant under vertex relabeling, and edge orbit sizes
/// are too.
pub fn symmetry_suite(trials: usize, seed: u64) -> SuiteOutcome {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for case in 0..trials {
        let (g, h) = random_pair(case_seed(seed.wrapping_add(404), case as u64), 7, 3, -0.5, 1.5);
        let sigma = random_permutation(g.vertex_count(), case_seed(seed, 7777 + case as u64));
        let relabeled = g.relabel(&sigma).expect("permutation is valid");
        let a = density(&g, &h).expect("small").value;
        let b = density(&relabeled, &h).expect("small").value;
        let err = rel_err(a, b);
        worst = worst.max(err);
        if err > 1e-12 {
            failures.push(format!("case {case}: {a} vs relabeled {b}"));
        }
        if g.vertex_count() <= 7 {
            let mut sizes = edge_orbits(&g).expect("small group").orbit_sizes();
            let mut relabeled_sizes = edge_orbits(&relabeled).expect("small group").orbit_sizes();
            sizes.sort_unstable();
            relabeled_sizes.sort_unstable();
            if sizes != relabeled_sizes {
                failures.push(format!("case {case}: orbit sizes changed under relabeling"));
            }
        }
    }
    SuiteOutcome {
        name: "relabeling_symmetry",
        trials,
        failures,
        worst,
    }
}

/// Standard trial counts; `quick` divides them by ten.
pub fn run_all(quick: bool, seed: u64) -> Vec<SuiteOutcome> {
    let scale = |n: usize| if quick { (n / 10).max(2) } else { n };
    vec![
        oracle_equivalence_suite(scale(200), seed),
        normalization_suite(),
        multilinear_identity_suite(scale(50), seed),
        edge_deleted_suite(scale(50), seed),
        derivative_suite(scale(20), seed),
        symmetry_suite(scale(50), seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_graph_is_seed_stable() {
        let a = random_graph(6, 0.5, 42);
        let b = random_graph(6, 0.5, 42);
        assert_eq!(a, b);
        assert_ne!(a, random_graph(6, 0.5, 43));
    }

    #[test]
    fn permutations_are_valid() {
        let p = random_permutation(9, 3);
        let mut sorted = p.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn quick_run_passes() {
        for outcome in run_all(true, 0) {
            assert!(outcome.passed(), "{}", outcome.human_line());
        }
    }
}
