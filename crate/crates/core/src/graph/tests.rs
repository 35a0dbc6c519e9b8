use super::*;
use crate::catalog;

/// Brute-force oracle: counts adjacency-preserving permutations by
/// enumerating all n! of them (Heap's algorithm), independent of the
/// backtracking search.
fn count_automorphisms_by_enumeration(g: &Graph) -> usize {
    fn heaps(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heaps(perm, k - 1, out);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    let n = g.vertex_count();
    assert!(n <= 8, "oracle is factorial");
    let mut perms = Vec::new();
    heaps(&mut (0..n).collect(), n, &mut perms);
    perms
        .into_iter()
        .filter(|p| VertexMapping::new(p.clone()).is_automorphism(g))
        .count()
}

fn exists_isomorphism_by_enumeration(f: &Graph, g: &Graph) -> bool {
    fn heaps(perm: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(perm.clone());
            return;
        }
        for i in 0..k {
            heaps(perm, k - 1, out);
            if k.is_multiple_of(2) {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    if f.vertex_count() != g.vertex_count() {
        return false;
    }
    let mut perms = Vec::new();
    heaps(&mut (0..f.vertex_count()).collect(), f.vertex_count(), &mut perms);
    perms
        .into_iter()
        .any(|p| VertexMapping::new(p).is_isomorphism(f, g))
}

mod construction {
    use super::*;

    #[test]
    fn rejects_self_loops_duplicates_and_out_of_range() {
        assert!(matches!(
            Graph::new(3, [(1, 1)]),
            Err(GraphError::SelfLoop(1, 1))
        ));
        assert!(matches!(
            Graph::new(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange(0, 2, 2))
        ));
    }

    #[test]
    fn normalizes_pairs_and_keeps_edge_order() {
        let g = Graph::new(4, [(2, 0), (3, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 2), (1, 3)]);
        assert_eq!(g.edge(0).unwrap(), (0, 2));
        assert!(g.edge(2).is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "0 1\n# comment\n1 2   # trailing comment\n\n2 3\n";
        let g = Graph::from_edge_list(text).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges(), catalog::path(4).edges());
        let again = Graph::from_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn edge_list_errors_carry_line_numbers() {
        let err = Graph::from_edge_list("0 1\n0 x\n").unwrap_err();
        assert!(matches!(err, GraphError::EdgeList { line: 2, .. }));
        let err = Graph::from_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, GraphError::EdgeList { line: 1, .. }));
    }
}

mod graph6_format {
    use super::*;

    #[test]
    fn decodes_complete_graph_k4() {
        let g = Graph::from_graph6("C~").unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn decodes_two_vertex_graphs() {
        // '?' carries six zero bits: the empty adjacency.
        let empty = Graph::from_graph6("A?").unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (2, 0));
        // '_' = 95 carries bits 100000: the single edge.
        let k2 = Graph::from_graph6("A_").unwrap();
        assert_eq!((k2.vertex_count(), k2.edge_count()), (2, 1));
        assert_eq!(k2.edges(), &[(0, 1)]);
    }

    #[test]
    fn decodes_paths_and_cycles_bit_by_bit() {
        // Pair bits in column order: (0,1),(0,2),(1,2),(0,3),(1,3),(2,3).
        // P4 = edges 01,12,23 -> bits 101001 -> 41 + 63 = 'h'.
        let p4 = Graph::from_graph6("Ch").unwrap();
        assert_eq!(p4.edges(), &[(0, 1), (1, 2), (2, 3)]);
        // 'r' = 114 -> bits 110011 -> edges 01,02,13,23: a 4-cycle.
        let c4 = Graph::from_graph6("Cr").unwrap();
        assert_eq!(c4.edges(), &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert!(find_isomorphism(&c4, &catalog::cycle(4)).is_some());
    }

    #[test]
    fn accepts_optional_header_and_trailing_newline() {
        let g = Graph::from_graph6(">>graph6<<C~\n").unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn round_trips_catalog_graphs() {
        for entry in catalog::listing() {
            let available = entry.graph.to_graph6();
            let decoded = Graph::from_graph6(&available).unwrap();
            assert_eq!(decoded.vertex_count(), entry.graph.vertex_count());
            // Decoding reorders edges row-major; compare as sets.
            let mut ours: Vec<_> = entry.graph.edges().to_vec();
            ours.sort_unstable();
            assert_eq!(decoded.edges(), ours.as_slice(), "{}", entry.name);
        }
    }

    #[test]
    fn encodings_match_an_independent_encoder() {
        // Expected strings were produced by a separate graph6 writer on
        // the same labelings.
        let cases = [
            ("P4", "Ch"),
            ("C4", "Cl"),
            ("C5", "Dhc"),
            ("C6", "EhEG"),
            ("K3", "Bw"),
            ("star_3", "Cs"),
            ("K_2_2", "C]"),
            ("K_2_3", "D]o"),
            ("K_3_3", "EFz_"),
            ("Q3", "Gr`HOk"),
        ];
        for (name, expect) in cases {
            let graph = catalog::build(name).unwrap().graph;
            assert_eq!(graph.to_graph6(), expect, "{name}");
        }
    }

    #[test]
    fn long_form_vertex_count_round_trips() {
        let g = Graph::new(63, [(0, 62)]).unwrap();
        let text = g.to_graph6();
        assert!(text.starts_with('~'));
        let back = Graph::from_graph6(&text).unwrap();
        assert_eq!(back.vertex_count(), 63);
        assert_eq!(back.edges(), &[(0, 62)]);
    }

    #[test]
    fn errors_carry_byte_offsets() {
        match Graph::from_graph6("C)") {
            Err(GraphError::Graph6(Graph6Error::OutOfRange { offset: 1, byte })) => {
                assert_eq!(byte, b')')
            }
            other => panic!("expected out-of-range at byte 1, got {other:?}"),
        }
        match Graph::from_graph6("C") {
            Err(GraphError::Graph6(Graph6Error::Truncated {
                expected: 1,
                found: 0,
                ..
            })) => {}
            other => panic!("expected truncation, got {other:?}"),
        }
        match Graph::from_graph6("C~~") {
            Err(GraphError::Graph6(Graph6Error::Trailing { offset: 2 })) => {}
            other => panic!("expected trailing byte at 2, got {other:?}"),
        }
        // n = 2 has one pair bit; a nonzero second bit is bad padding.
        match Graph::from_graph6("AO") {
            Err(GraphError::Graph6(Graph6Error::Padding { offset: 1 })) => {}
            other => panic!("expected padding error, got {other:?}"),
        }
    }
}

mod structure {
    use super::*;

    #[test]
    fn triangle_is_not_bipartite_and_yields_an_odd_walk() {
        let k3 = catalog::cycle(3);
        let walk = k3.bipartition().unwrap_err();
        assert!(walk.verify(&k3));
        assert!(k3.is_bipartite().is_none());
    }

    #[test]
    fn odd_walk_certificates_verify_on_odd_cycles_with_tails() {
        // C5 with a pendant path, so the walk passes through a BFS tree.
        let g = Graph::new(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6)]).unwrap();
        let walk = g.bipartition().unwrap_err();
        assert!(walk.verify(&g));
        assert_eq!(walk.len() % 2, 1);
    }

    #[test]
    fn even_cycle_bipartition() {
        let b = catalog::cycle(4).bipartition().unwrap();
        assert_eq!(b.part_a, vec![0, 2]);
        assert_eq!(b.part_b, vec![1, 3]);
        assert_eq!((b.degree_a, b.degree_b), (Some(2), Some(2)));
    }

    #[test]
    fn path_bipartition_has_no_common_degrees() {
        let p4 = catalog::path(4);
        let b = p4.bipartition().unwrap();
        assert_eq!(b.part_a, vec![0, 2]);
        assert_eq!(b.part_b, vec![1, 3]);
        // Part A holds degrees {1, 2}, so no common degree exists.
        assert_eq!(b.degree_a, None);
        assert_eq!(b.degree_b, None);
        assert_eq!(part_degrees(&p4, &b), None);
    }

    #[test]
    fn disconnected_bipartition_anchors_each_component_in_part_a() {
        let g = catalog::cycle(4).disjoint_union(&catalog::cycle(4));
        let b = g.bipartition().unwrap();
        assert!(b.part_a.contains(&0) && b.part_a.contains(&4));
        assert!(b.is_valid_for(&g));
    }

    #[test]
    fn part_degrees_swap_so_a_is_smallest() {
        let star = catalog::star(3);
        let b = star.bipartition().unwrap();
        assert_eq!(part_degrees(&star, &b), Some((1, 3)));
        let k33 = catalog::complete_bipartite(3, 3);
        let b = k33.bipartition().unwrap();
        assert_eq!(part_degrees(&k33, &b), Some((3, 3)));
    }

    #[test]
    fn components_of_unions_and_splits() {
        let c4 = catalog::cycle(4);
        assert_eq!(c4.connected_components(), vec![vec![0, 1, 2, 3]]);

        let with_singleton = c4.disjoint_union(&c4).disjoint_union(&Graph::new(1, []).unwrap());
        let comps = with_singleton.connected_components();
        assert_eq!(comps.len(), 3);
        assert_eq!(comps[2], vec![8]);

        let split = catalog::path(4).delete_edge(1).unwrap();
        assert_eq!(
            split.connected_components(),
            vec![vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn delete_edge_examples() {
        let c4 = catalog::cycle(4);
        for l in 0..4 {
            let deleted = c4.delete_edge(l).unwrap();
            assert_eq!(deleted.vertex_count(), 4);
            assert_eq!(deleted.edge_count(), 3);
            assert!(find_isomorphism(&deleted, &catalog::path(4)).is_some());
        }

        let two_k2 = catalog::path(4).delete_edge(1).unwrap();
        assert_eq!(two_k2.edges(), &[(0, 1), (2, 3)]);

        let k33 = catalog::complete_bipartite(3, 3);
        let deleted = k33.delete_edge(0).unwrap();
        assert_eq!(deleted.vertex_count(), 6);
        assert_eq!(deleted.edge_count(), 8);
        assert_eq!(deleted.degrees(), vec![2, 3, 3, 2, 3, 3]);

        assert!(matches!(
            c4.delete_edge(4),
            Err(GraphError::EdgeIndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn delete_then_restore_is_isomorphic_to_original() {
        for entry in catalog::listing() {
            if entry.graph.edge_count() == 0 || entry.graph.vertex_count() > 12 {
                continue;
            }
            let (i, j) = entry.graph.edge(0).unwrap();
            let deleted = entry.graph.delete_edge(0).unwrap();
            let restored = Graph::new(
                deleted.vertex_count(),
                deleted.edges().iter().copied().chain([(i, j)]),
            )
            .unwrap();
            assert!(
                find_isomorphism(&restored, &entry.graph).is_some(),
                "{}",
                entry.name
            );
        }
    }
}

mod symmetry {
    use super::*;

    #[test]
    fn isomorphism_found_for_relabeled_cycle() {
        let c4 = catalog::cycle(4);
        let relabeled = c4.relabel(&[2, 0, 3, 1]).unwrap();
        let pi = find_isomorphism(&c4, &relabeled).unwrap();
        assert!(pi.is_isomorphism(&c4, &relabeled));
    }

    #[test]
    fn no_isomorphism_across_degree_or_component_structure() {
        assert!(find_isomorphism(&catalog::path(4), &catalog::path(4).delete_edge(1).unwrap())
            .is_none());
        let c6 = catalog::cycle(6);
        let c3c3 = catalog::cycle(3).disjoint_union(&catalog::cycle(3));
        assert!(find_isomorphism(&c6, &c3c3).is_none());
        assert!(!exists_isomorphism_by_enumeration(&c6, &c3c3));
    }

    #[test]
    fn automorphism_groups_match_the_factorial_oracle() {
        let cases = [
            (catalog::path(4), 2),
            (catalog::cycle(4), 8),
            (catalog::star(3), 6),
            (catalog::cycle(6), 12),
            (catalog::complete_bipartite(3, 3), 72),
        ];
        for (g, expected) in cases {
            let group = automorphism_group(&g).unwrap();
            assert_eq!(group.len(), expected);
            assert_eq!(count_automorphisms_by_enumeration(&g), expected);
            assert_eq!(group[0], VertexMapping::identity(g.vertex_count()));
            assert!(group.iter().all(|pi| pi.is_automorphism(&g)));
        }
    }

    #[test]
    fn group_cap_is_enforced() {
        let edgeless = Graph::new(12, []).unwrap();
        assert!(matches!(
            automorphism_group_capped(&edgeless, 1000),
            Err(GraphError::GroupTooLarge { cap: 1000 })
        ));
    }

    #[test]
    fn hypercube_group_order() {
        // |Aut(Q_3)| = 2^3 * 3! = 48.
        assert_eq!(automorphism_group(&catalog::hypercube(3)).unwrap().len(), 48);
    }

    #[test]
    fn edge_orbits_of_paths_and_cycles() {
        let orbits = edge_orbits(&catalog::cycle(4)).unwrap();
        assert_eq!(orbits.orbit_count(), 1);

        let orbits = edge_orbits(&catalog::path(4)).unwrap();
        assert_eq!(orbits.orbits(), &[vec![0, 2], vec![1]]);
        let witness = orbits.witness_between(0, 2).unwrap();
        assert!(witness.is_automorphism(&catalog::path(4)));
        assert_eq!(witness.apply_edge((0, 1)), (2, 3));
        assert!(orbits.witness_between(0, 1).is_none());
    }

    #[test]
    fn witnesses_verify_for_every_orbit_pair() {
        for entry in [catalog::build("Q3").unwrap(), catalog::build("K_2_3").unwrap()] {
            let g = &entry.graph;
            let orbits = edge_orbits(g).unwrap();
            for orbit in orbits.orbits() {
                for &a in orbit {
                    for &b in orbit {
                        let w = orbits.witness_between(a, b).unwrap();
                        assert!(w.is_automorphism(g));
                        assert_eq!(w.apply_edge(g.edges()[a]), g.edges()[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn edge_transitivity_fixtures() {
        assert!(is_edge_transitive(&catalog::star(3)).unwrap());
        assert!(!is_edge_transitive(&catalog::path(4)).unwrap());
        assert!(is_edge_transitive(&catalog::complete_bipartite(3, 3)).unwrap());
        assert!(is_edge_transitive(&Graph::new(5, []).unwrap()).unwrap());
    }

    #[test]
    fn orbit_sizes_are_relabeling_invariant() {
        let g = catalog::path(4).disjoint_union(&catalog::star(3));
        let mut sizes = edge_orbits(&g).unwrap().orbit_sizes();
        sizes.sort_unstable();
        // A fixed scramble of the vertices.
        let sigma = [5, 2, 7, 0, 4, 6, 1, 3];
        let relabeled = g.relabel(&sigma).unwrap();
        let mut relabeled_sizes = edge_orbits(&relabeled).unwrap().orbit_sizes();
        relabeled_sizes.sort_unstable();
        assert_eq!(sizes, relabeled_sizes);
    }

    #[test]
    fn group_order_divides_factorial_and_respects_vertex_transitivity() {
        for name in ["C4", "C6", "Q3", "K_3_3"] {
            let g = catalog::build(name).unwrap().graph;
            let order = automorphism_group(&g).unwrap().len();
            let n = g.vertex_count();
            let factorial: usize = (1..=n).product();
            assert_eq!(factorial % order, 0, "{name}");
            // These entries are vertex-transitive, so n divides the order.
            assert_eq!(order % n, 0, "{name}");
        }
    }

    #[test]
    fn components_isomorphic_fixtures() {
        let c4 = catalog::cycle(4);
        let two_c4 = c4.disjoint_union(&c4).disjoint_union(&Graph::new(1, []).unwrap());
        let report = components_isomorphic(&two_c4);
        assert!(report.all_isomorphic());
        assert_eq!(report.singleton_count, 1);
        assert_eq!(report.components.len(), 2);

        let mixed = c4.disjoint_union(&catalog::cycle(6));
        assert!(!components_isomorphic(&mixed).all_isomorphic());

        let c6_c3_c3 = catalog::cycle(6)
            .disjoint_union(&catalog::cycle(3))
            .disjoint_union(&catalog::cycle(3));
        assert!(!components_isomorphic(&c6_c3_c3).all_isomorphic());

        // A single connected graph passes trivially.
        assert!(components_isomorphic(&c4).all_isomorphic());
    }
}
