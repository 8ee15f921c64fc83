mod common;

use common::{brute_values, target, tree_strategy};
use msr_plan::centrality::{rank_entities, spot_values, target_center, EntityRef};
use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::model::SpotId;
use proptest::prelude::*;

fn engine_values(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let table = spot_values(&target(n, edges)).unwrap();
    (0..n as u32).map(|i| table.get(SpotId(i))).collect()
}

proptest! {
    #[test]
    fn tree_values_match_brute_force((n, edges) in tree_strategy(1, 12)) {
        let got = engine_values(n, &edges);
        let want = brute_values(n, &edges);
        for (i, (g, w)) in got.iter().zip(&want).enumerate() {
            prop_assert!((g - w).abs() < 1e-12, "spot {i}: {g} vs {w}");
        }
    }

    #[test]
    fn values_bounded_and_leaves_zero((n, edges) in tree_strategy(3, 12)) {
        let values = engine_values(n, &edges);
        let adj = common::adjacency_lists(n, &edges);
        for (i, v) in values.iter().enumerate() {
            prop_assert!((0.0..=1.0).contains(v));
            if adj[i].len() == 1 {
                prop_assert_eq!(*v, 0.0);
            }
        }
    }

    /// Extra edges on top of a tree: betweenness still follows the definition.
    #[test]
    fn graph_values_match_brute_force(
        (n, mut edges) in tree_strategy(3, 9),
        extra in proptest::collection::vec((0u32..9, 0u32..9), 0..4),
    ) {
        for (a, b) in extra {
            let (a, b) = (a % n as u32, b % n as u32);
            if a != b && !edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
                edges.push((a, b));
            }
        }
        let got = engine_values(n, &edges);
        let want = brute_values(n, &edges);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn ranking_is_sorted_permutation(n in 2usize..25, seed in 0u64..1000) {
        let s = generate_scenario(&GenParams::new(n, seed)).unwrap();
        let center = target_center(&s.target).unwrap();
        let ranked = rank_entities(&s, center);
        let distances: Vec<f64> = ranked.0.iter().map(|e| e.distance).collect();
        prop_assert!(distances.windows(2).all(|w| w[0] <= w[1]));
        let mut singles = 0;
        let mut configs = Vec::new();
        for e in ranked.entities() {
            match e {
                EntityRef::Singleton(_) => singles += 1,
                EntityRef::Configuration(c) => configs.push(c),
            }
        }
        configs.sort_unstable();
        configs.dedup();
        prop_assert_eq!(singles, s.singletons().count());
        prop_assert_eq!(configs.len(), s.configurations.len());
        prop_assert_eq!(ranked.len(), singles + s.configurations.len());
    }
}

#[test]
fn known_values() {
    // Path of five: pairs through the middle are {0,3},{0,4},{1,3},{1,4} of six.
    let v = engine_values(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    assert_eq!(v[2], 4.0 / 6.0);
    assert_eq!(v[1], 3.0 / 6.0);
    // 4-cycle: of the four shortest paths between the other three corners,
    // one of the two opposite-corner routes passes through.
    let v = engine_values(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    for x in v {
        assert!((x - 0.25).abs() < 1e-12);
    }
}
