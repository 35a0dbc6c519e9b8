use super::*;
use crate::catalog;
use crate::graphon::l1_distance;
use crate::tol;

fn halves(values: [f64; 4]) -> StepGraphon<f64> {
    StepGraphon::new(vec![0.5, 0.5], values.to_vec()).unwrap()
}

/// The hand kernel used across the path examples: block values
/// [[1, 0.5], [0.5, 0]] on equal halves.
fn hand_kernel() -> StepGraphon<f64> {
    halves([1.0, 0.5, 0.5, 0.0])
}

fn bipartite_pattern() -> StepGraphon<f64> {
    halves([0.0, 1.0, 1.0, 0.0])
}

#[test]
fn constant_kernel_gives_c_to_the_k() {
    for (g, c) in [
        (catalog::path(4), 0.5),
        (catalog::cycle(6), 1.25),
        (catalog::complete_bipartite(2, 3), -0.5),
    ] {
        let h = StepGraphon::<f64>::constant(c).unwrap();
        let expect = c.powi(g.edge_count() as i32);
        let brute = brute_force_density(&g, &h).unwrap();
        let fast = density(&g, &h).unwrap();
        assert!((brute.value - expect).abs() < 1e-14);
        assert!((fast.value - expect).abs() < 1e-14);
        assert_eq!(brute.method, EvalMethod::Oracle);
        assert_eq!(fast.method, EvalMethod::Contraction);
    }
}

#[test]
fn single_edge_density_is_the_mean() {
    let h = halves([0.2, 0.6, 0.6, 1.0]);
    let k2 = catalog::path(2);
    // 0.25 * (0.2 + 0.6 + 0.6 + 1.0) = 0.6.
    assert!((brute_force_density(&k2, &h).unwrap().value - 0.6).abs() < 1e-15);
    assert!((density(&k2, &h).unwrap().value - 0.6).abs() < 1e-15);
    assert!((h.mean() - 0.6).abs() < 1e-15);
}

#[test]
fn identity_pattern_on_c4_counts_constant_maps() {
    // Only the two constant block maps survive, each weighing (1/2)^4.
    let h = halves([1.0, 0.0, 0.0, 1.0]);
    let c4 = catalog::cycle(4);
    assert!((brute_force_density(&c4, &h).unwrap().value - 0.125).abs() < 1e-15);
    assert!((density(&c4, &h).unwrap().value - 0.125).abs() < 1e-15);
}

#[test]
fn bipartite_pattern_on_k33_counts_proper_colorings() {
    // The two proper 2-colorings of K_{3,3} each weigh (1/2)^6.
    let k33 = catalog::complete_bipartite(3, 3);
    let value = density(&k33, &bipartite_pattern()).unwrap().value;
    assert!((value - 0.03125).abs() < 1e-15);
    let brute = brute_force_density(&k33, &bipartite_pattern()).unwrap().value;
    assert!((brute - 0.03125).abs() < 1e-15);
}

#[test]
fn brute_force_guard_refuses_large_state_spaces() {
    let torus = catalog::torus(6, 6);
    let h = StepGraphon::<f64>::random(2, 0.0, 1.0, 1).unwrap();
    assert!(matches!(
        brute_force_density(&torus, &h),
        Err(DensityError::BruteForceGuard { .. })
    ));
    // The contraction path handles it.
    assert!(density(&torus, &h).is_ok());
}

#[test]
fn table_budget_failures_report_the_width() {
    let torus = catalog::torus(6, 6);
    let h = StepGraphon::<f64>::random(3, 0.0, 1.0, 1).unwrap();
    let tight = EvalOptions { table_budget: 1024 };
    match density_with(&torus, &h, &tight) {
        Err(DensityError::TableBudget { width, needed, .. }) => {
            assert!(width >= 6);
            assert!(needed > 1024);
        }
        other => panic!("expected a budget refusal, got {other:?}"),
    }
}

#[test]
fn normalization_on_the_catalog() {
    for entry in catalog::listing() {
        let value = density(&entry.graph, &StepGraphon::<f64>::one())
            .unwrap()
            .value;
        assert!(
            (value - 1.0).abs() <= tol::NORMALIZATION,
            "{}: {value}",
            entry.name
        );
    }
}

#[test]
fn oracle_equivalence_on_random_pairs() {
    for seed in 0..40u64 {
        let (g, h) = crate::selftest::random_pair(seed, 7, 3, -1.0, 2.0);
        let brute = brute_force_density(&g, &h).unwrap().value;
        let fast = density(&g, &h).unwrap().value;
        assert!(
            values_agree(fast, brute, tol::ORACLE_REL),
            "seed {seed}: {fast} vs {brute}"
        );
    }
}

#[test]
fn multilinear_all_equal_matches_plain_density() {
    for seed in 0..10u64 {
        let (g, h) = crate::selftest::random_pair(seed + 100, 6, 3, 0.0, 1.5);
        let assignment = EdgeAssignment::uniform(g.clone(), &h);
        let multi = multilinear_density(&assignment).unwrap().value;
        let plain = density(&g, &h).unwrap().value;
        assert!((multi - plain).abs() <= 1e-12 * plain.abs().max(1.0));
    }
}

#[test]
fn multilinear_constant_slots_integrate_out() {
    // On the triangle, two constant-one slots leave the mean of h.
    let k3 = catalog::cycle(3);
    let h = hand_kernel();
    let one = StepGraphon::one();
    let assignment =
        EdgeAssignment::new(k3.clone(), vec![one.clone(), one, h.clone()]).unwrap();
    let value = multilinear_density(&assignment).unwrap().value;
    assert!((value - h.mean()).abs() < 1e-15);
    let brute = brute_force_multilinear(&assignment).unwrap().value;
    assert!((brute - h.mean()).abs() < 1e-15);
}

#[test]
fn multilinear_zero_slot_annihilates() {
    let c4 = catalog::cycle(4);
    let zero = StepGraphon::constant(0.0).unwrap();
    let assignment =
        EdgeAssignment::uniform_with_slot(c4, &hand_kernel(), 2, &zero).unwrap();
    assert_eq!(multilinear_density(&assignment).unwrap().value, 0.0);
}

#[test]
fn kernel_count_mismatch_is_rejected() {
    let c4 = catalog::cycle(4);
    assert!(matches!(
        EdgeAssignment::new(c4, vec![StepGraphon::<f64>::one(); 3]),
        Err(DensityError::KernelCount {
            expected: 4,
            got: 3
        })
    ));
}

#[test]
fn edge_deleted_densities_on_the_path() {
    let p4 = catalog::path(4);
    let t = edge_deleted_densities(&p4, &hand_kernel()).unwrap();
    assert_eq!(t.len(), 3);
    assert!((t[0] - 0.3125).abs() < 1e-15, "outer: {}", t[0]);
    assert!((t[1] - 0.25).abs() < 1e-15, "middle: {}", t[1]);
    assert!((t[2] - 0.3125).abs() < 1e-15, "outer: {}", t[2]);
}

#[test]
fn edge_deleted_matches_deleting_the_edge() {
    for seed in 0..8u64 {
        let (g, h) = crate::selftest::random_pair(seed + 300, 6, 3, 0.0, 1.5);
        let slots = edge_deleted_densities(&g, &h).unwrap();
        for (l, &t) in slots.iter().enumerate() {
            let deleted = g.delete_edge(l).unwrap();
            let direct = density(&deleted, &h).unwrap().value;
            let brute = brute_force_density(&deleted, &h).unwrap().value;
            assert!(values_agree(t, direct, tol::EDGE_DELETED_REL));
            assert!(values_agree(t, brute, tol::EDGE_DELETED_REL));
        }
    }
}

#[test]
fn edge_deleted_on_cycles_is_constant_and_one_on_the_constant_kernel() {
    let c4 = catalog::cycle(4);
    let h = StepGraphon::<f64>::random(2, 0.0, 1.0, 11).unwrap();
    let t = edge_deleted_densities(&c4, &h).unwrap();
    for &value in &t[1..] {
        assert!((value - t[0]).abs() < 1e-12);
    }
    let ones = edge_deleted_densities(&c4, &StepGraphon::<f64>::one()).unwrap();
    assert!(ones.iter().all(|&v| (v - 1.0).abs() < 1e-14));
}

#[test]
fn uniform_derivative_examples() {
    let p4 = catalog::path(4);
    assert!((uniform_direction_derivative(&p4, &StepGraphon::<f64>::one()).unwrap() - 3.0).abs() < 1e-13);
    let k2 = catalog::path(2);
    let h = hand_kernel();
    assert!((uniform_direction_derivative(&k2, &h).unwrap() - 1.0).abs() < 1e-14);
    assert!((uniform_direction_derivative(&p4, &h).unwrap() - 0.875).abs() < 1e-14);
}

#[test]
fn central_differences_converge_to_the_uniform_derivative() {
    let g = catalog::cycle(4);
    let h = halves([0.9, 0.5, 0.5, 1.2]);
    let exact = uniform_direction_derivative(&g, &h).unwrap();
    let diff = |eps: f64| {
        let plus = density(&g, &h.shift(eps)).unwrap().value;
        let minus = density(&g, &h.shift(-eps)).unwrap().value;
        (plus - minus) / (2.0 * eps)
    };
    let err3 = (diff(1e-3) - exact).abs();
    let err4 = (diff(1e-4) - exact).abs();
    let slope = (err3 / err4).log10();
    assert!((slope - 2.0).abs() <= 0.3, "slope {slope}");
}

#[test]
fn perturbed_pair_identities() {
    let p4 = catalog::path(4);
    let h = hand_kernel();
    let at_zero = perturbed_pair_density(&p4, &h, 0.0, 0, 1).unwrap();
    let base = density(&p4, &h).unwrap().value;
    assert!((at_zero - base).abs() < 1e-15);

    // On an edge-transitive graph the linear terms cancel.
    let c4 = catalog::cycle(4);
    let hc = halves([0.9, 0.5, 0.5, 1.2]);
    let base_c4 = density(&c4, &hc).unwrap().value;
    for eps in [1e-2, 1e-3] {
        let shifted = perturbed_pair_density(&c4, &hc, eps, 0, 2).unwrap();
        assert!((shifted - base_c4).abs() <= 4.0 * eps * eps);
    }

    // Outer vs middle slope on the path: 0.3125 - 0.25.
    for eps in [1e-3, 1e-4] {
        let plus = perturbed_pair_density(&p4, &h, eps, 0, 1).unwrap();
        let minus = perturbed_pair_density(&p4, &h, -eps, 0, 1).unwrap();
        let slope = (plus - minus) / (2.0 * eps);
        assert!((slope - 0.0625).abs() < 1e-10, "slope {slope}");
    }

    assert!(matches!(
        perturbed_pair_density(&p4, &h, 0.1, 1, 1),
        Err(DensityError::SameSlot)
    ));
    assert!(matches!(
        perturbed_pair_density(&p4, &h, 0.1, 0, 9),
        Err(DensityError::EdgeIndex { index: 9, .. })
    ));
}

#[test]
fn monotone_in_the_kernel_on_nonnegative_inputs() {
    for seed in 0..10u64 {
        let (g, h) = crate::selftest::random_pair(seed + 500, 6, 3, 0.0, 1.0);
        let larger = h.shift(0.25);
        let a = density(&g, &h).unwrap().value;
        let b = density(&g, &larger).unwrap().value;
        assert!(a <= b + 1e-12);
    }
}

#[test]
fn multiplicative_over_disjoint_unions() {
    let f = catalog::cycle(4);
    let g = catalog::path(3);
    let h = StepGraphon::<f64>::random(3, 0.0, 1.2, 21).unwrap();
    let product = density(&f, &h).unwrap().value * density(&g, &h).unwrap().value;
    let union = density(&f.disjoint_union(&g), &h).unwrap().value;
    assert!(values_agree(union, product, tol::ORACLE_REL));
}

#[test]
fn isolated_vertices_are_neutral() {
    let g = catalog::cycle(4);
    let padded = g.disjoint_union(&crate::graph::Graph::new(2, []).unwrap());
    let h = StepGraphon::<f64>::random(2, 0.0, 1.0, 31).unwrap();
    let a = density(&g, &h).unwrap().value;
    let b = density(&padded, &h).unwrap().value;
    assert!((a - b).abs() <= 1e-12);
    let brute = brute_force_density(&padded, &h).unwrap().value;
    assert!((a - brute).abs() <= 1e-12);
}

#[test]
fn relabeling_leaves_density_unchanged_up_to_roundoff() {
    for seed in 0..10u64 {
        let (g, h) = crate::selftest::random_pair(seed + 700, 7, 3, -0.5, 1.5);
        let sigma = crate::selftest::random_permutation(g.vertex_count(), seed + 701);
        let relabeled = g.relabel(&sigma).unwrap();
        let a = density(&g, &h).unwrap().value;
        let b = density(&relabeled, &h).unwrap().value;
        assert!(values_agree(a, b, 1e-12), "seed {seed}: {a} vs {b}");
    }
}

#[test]
fn degenerate_graphs() {
    let h = hand_kernel();
    let empty = crate::graph::Graph::new(0, []).unwrap();
    assert_eq!(density(&empty, &h).unwrap().value, 1.0);
    assert_eq!(brute_force_density(&empty, &h).unwrap().value, 1.0);
    let edgeless = crate::graph::Graph::new(3, []).unwrap();
    assert!((density(&edgeless, &h).unwrap().value - 1.0).abs() < 1e-15);
}

#[test]
fn refinement_preserves_densities() {
    let h = hand_kernel();
    let other = StepGraphon::new(vec![0.3, 0.7], vec![0.2, 0.8, 0.8, 0.4]).unwrap();
    let refined = crate::graphon::common_refinement(&[h.clone(), other]);
    assert!(l1_distance(&h, &refined[0]) == 0.0);
    for g in [catalog::path(3), catalog::cycle(4), catalog::cycle(3)] {
        let a = density(&g, &h).unwrap().value;
        let b = density(&g, &refined[0]).unwrap().value;
        assert!(values_agree(a, b, 1e-12));
    }
}

#[test]
fn bounded_kernels_give_bounded_densities() {
    for seed in 0..10u64 {
        let (g, h) = crate::selftest::random_pair(seed + 900, 6, 3, 0.0, 1.0);
        let value = density(&g, &h).unwrap().value;
        assert!((-1e-15..=1.0 + 1e-12).contains(&value));
    }
}

#[test]
fn single_precision_agrees_loosely() {
    let g = catalog::cycle(4);
    let h64 = hand_kernel();
    let h32 = StepGraphon::<f32>::new(
        vec![0.5, 0.5],
        h64.values().iter().map(|&v| v as f32).collect(),
    )
    .unwrap();
    let v64 = density(&g, &h64).unwrap().value;
    let v32 = density(&g, &h32).unwrap().value;
    assert!((f64::from(v32) - v64).abs() < 1e-6);
}
