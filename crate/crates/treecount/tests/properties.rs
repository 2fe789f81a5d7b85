//! Randomized invariants tying the three counting routes together.
//! Instances come from the harness generators keyed by a proptest seed,
//! so failures shrink to a reproducible seed.

use num_traits::One;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use treecount::enumerate::{
    enumerate_constrained, enumerate_spanning_trees, tree_sum_by_enumeration,
};
use treecount::harness::{gen_connected_multigraph, random_forest_edges};
use treecount::kirchhoff::{
    count_constrained, count_spanning_trees, weighted_tree_sum, EdgeWeighting,
};
use treecount::{Count, EdgeSet, MultiGraph, TreeSum};

const CAP: usize = 200_000;

fn small_graph(seed: u64) -> MultiGraph {
    gen_connected_multigraph(seed, 7, 10, 3)
}

fn rational(rng: &mut ChaCha8Rng) -> TreeSum {
    let num = rng.gen_range(1i64..=5);
    let den = rng.gen_range(1i64..=3);
    TreeSum::new(num.into(), den.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enumeration_matches_determinant(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let trees = enumerate_spanning_trees(&g, CAP).expect("under cap");
        prop_assert_eq!(Count::from(trees.len()), count_spanning_trees(&g));
    }

    #[test]
    fn deletion_contraction_identity(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        prop_assume!(g.edge_count() > 0);
        let ids: Vec<_> = g.edge_ids().into_iter().collect();
        let e = ids[seed as usize % ids.len()];
        let single: EdgeSet = [e].into_iter().collect();
        let deleted = g.delete_edges(&single).unwrap();
        let (contracted, _) = g.contract_edges(&single).unwrap();
        prop_assert_eq!(
            count_spanning_trees(&g),
            count_spanning_trees(&deleted) + count_spanning_trees(&contracted)
        );
    }

    #[test]
    fn constrained_count_matches_filtered_enumeration(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let f = random_forest_edges(&g, (seed as u64).wrapping_mul(0x9e3779b9));
        let trees = enumerate_constrained(&g, &f, CAP).expect("under cap");
        prop_assert_eq!(Count::from(trees.len()), count_constrained(&g, &f));
    }

    #[test]
    fn forcing_a_cycle_counts_nothing(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let trees = enumerate_spanning_trees(&g, CAP).expect("under cap");
        prop_assume!(!trees.is_empty());
        let tree = &trees[seed as usize % trees.len()];
        let extra: Vec<_> = g.edge_ids().difference(tree).copied().collect();
        prop_assume!(!extra.is_empty());
        let mut cyclic = tree.clone();
        cyclic.insert(extra[seed as usize % extra.len()]);
        prop_assert!(!g.is_forest(&cyclic));
        prop_assert_eq!(count_constrained(&g, &cyclic), Count::from(0u32));
    }

    #[test]
    fn all_ones_weighting_reduces_to_the_count(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let w = EdgeWeighting::assign_all(&g, &TreeSum::one());
        prop_assert_eq!(
            weighted_tree_sum(&g, &w),
            TreeSum::from_integer(count_spanning_trees(&g))
        );
    }

    #[test]
    fn weighted_routes_agree(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let mut rng = ChaCha8Rng::seed_from_u64((seed as u64) ^ 0xabcd);
        let mut w = EdgeWeighting::new();
        for e in g.edge_ids() {
            w.set(e, rational(&mut rng));
        }
        prop_assert_eq!(
            weighted_tree_sum(&g, &w),
            tree_sum_by_enumeration(&g, &w, &EdgeSet::new(), CAP).expect("under cap")
        );
    }

    #[test]
    fn scaling_all_weights_scales_by_tree_size(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        prop_assume!(g.vertex_count() > 1);
        let mut rng = ChaCha8Rng::seed_from_u64((seed as u64) ^ 0x5151);
        let scale = rational(&mut rng);
        let mut base = EdgeWeighting::new();
        let mut scaled = EdgeWeighting::new();
        for e in g.edge_ids() {
            let v = rational(&mut rng);
            base.set(e, v.clone());
            scaled.set(e, v * scale.clone());
        }
        // every spanning tree has n-1 edges, so the sum picks up scale^(n-1)
        let mut factor = TreeSum::one();
        for _ in 1..g.vertex_count() {
            factor *= scale.clone();
        }
        prop_assert_eq!(
            weighted_tree_sum(&g, &scaled),
            factor * weighted_tree_sum(&g, &base)
        );
    }

    #[test]
    fn enumerated_trees_span(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let all = g.edge_ids();
        for tree in enumerate_spanning_trees(&g, CAP).expect("under cap") {
            prop_assert_eq!(tree.len(), g.vertex_count() - 1);
            prop_assert!(tree.is_subset(&all));
            prop_assert!(g.is_forest(&tree));
        }
    }

    #[test]
    fn contraction_accounts_for_every_edge(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let f = random_forest_edges(&g, (seed as u64) ^ 0x7777);
        let (h, map) = g.contract_edges(&f).unwrap();
        for &v in g.vertices() {
            prop_assert!(h.has_vertex(map.image(v)));
        }
        let mut seen = map.contracted().clone();
        seen.extend(map.dropped_loops().iter().copied());
        seen.extend(h.edge_ids());
        prop_assert_eq!(seen, g.edge_ids());
        prop_assert_eq!(
            h.edge_count(),
            g.edge_count() - map.contracted().len() - map.dropped_loops().len()
        );
    }

    #[test]
    fn contraction_composes(seed in any::<u32>()) {
        let g = small_graph(seed as u64);
        let f = random_forest_edges(&g, (seed as u64) ^ 0x2222);
        let (f1, f2): (EdgeSet, EdgeSet) = f
            .iter()
            .enumerate()
            .fold((EdgeSet::new(), EdgeSet::new()), |mut acc, (i, &e)| {
                if i % 2 == 0 {
                    acc.0.insert(e);
                } else {
                    acc.1.insert(e);
                }
                acc
            });
        let (h1, m1) = g.contract_edges(&f1).unwrap();
        // forest edges stay non-loop after the first step, so they are
        // still contractible in the intermediate graph
        let (h2, m2) = h1.contract_edges(&f2).unwrap();
        let composed = m1.compose(&m2);
        for &v in g.vertices() {
            prop_assert_eq!(composed.image(v), m2.image(m1.image(v)));
        }
        let (direct, _) = g.contract_edges(&f).unwrap();
        prop_assert_eq!(count_spanning_trees(&direct), count_spanning_trees(&h2));
    }
}
