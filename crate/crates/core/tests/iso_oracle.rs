mod common;

use std::collections::BTreeSet;

use common::{brute_full_embeddings, brute_mcs, config, target, tree_strategy};
use msr_plan::centrality::spot_values;
use msr_plan::iso::{is_valid_embedding, EmbeddingKind, EmbeddingSearch, IsoParams};
use msr_plan::model::SpotId;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn full_sets_match_brute_force(
        (nc, ce) in tree_strategy(1, 8),
        (nt, te) in tree_strategy(1, 8),
    ) {
        let (c, t) = (config(nc, &ce), target(nt, &te));
        let values = spot_values(&t).unwrap();
        let found = EmbeddingSearch::new(&c, &t, &values).full(IsoParams::unbounded());
        for e in &found {
            prop_assert!(is_valid_embedding(e, &c, &t));
            prop_assert_eq!(e.kind, EmbeddingKind::Full);
        }
        let got: BTreeSet<_> = found.iter().map(|e| e.mapping.clone()).collect();
        prop_assert_eq!(got.len(), found.len(), "duplicate embeddings");
        prop_assert_eq!(got, brute_full_embeddings(nc, &ce, nt, &te));
    }

    #[test]
    fn mcs_matches_brute_force(
        (nc, ce) in tree_strategy(1, 7),
        (nt, te) in tree_strategy(1, 7),
    ) {
        let (c, t) = (config(nc, &ce), target(nt, &te));
        let values = spot_values(&t).unwrap();
        let search = EmbeddingSearch::new(&c, &t, &values);
        let (size, all) = brute_mcs(nc, &ce, nt, &te);
        prop_assert_eq!(search.common_size(), size);
        let found = search.mcs(IsoParams::unbounded()).unwrap();
        for e in &found {
            prop_assert!(is_valid_embedding(e, &c, &t));
            prop_assert_eq!(e.size(), size);
        }
        let got: BTreeSet<_> = found.into_iter().map(|e| e.mapping).collect();
        prop_assert_eq!(got, all);
    }

    #[test]
    fn cap_and_restriction_are_honored(
        (nc, ce) in tree_strategy(2, 5),
        (nt, te) in tree_strategy(2, 9),
        cap in 1usize..6,
        banned in 0u32..9,
    ) {
        let (c, t) = (config(nc, &ce), target(nt, &te));
        let values = spot_values(&t).unwrap();
        let all = brute_full_embeddings(nc, &ce, nt, &te);
        let capped = EmbeddingSearch::new(&c, &t, &values).full(IsoParams { max_embeddings: cap });
        prop_assert_eq!(capped.len(), all.len().min(cap));
        for e in &capped {
            prop_assert!(all.contains(&e.mapping));
        }

        let banned = SpotId(banned % nt as u32);
        let restricted = EmbeddingSearch::new(&c, &t, &values)
            .restrict_to(|s| s != banned)
            .full(IsoParams::unbounded());
        let want: BTreeSet<_> = all
            .iter()
            .filter(|m| m.iter().all(|&(_, s)| s != banned))
            .cloned()
            .collect();
        let got: BTreeSet<_> = restricted.into_iter().map(|e| e.mapping).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn enumeration_is_deterministic(
        (nc, ce) in tree_strategy(2, 6),
        (nt, te) in tree_strategy(2, 10),
    ) {
        let (c, t) = (config(nc, &ce), target(nt, &te));
        let values = spot_values(&t).unwrap();
        let search = EmbeddingSearch::new(&c, &t, &values);
        let p = IsoParams { max_embeddings: 20 };
        prop_assert_eq!(search.full(p), search.full(p));
        prop_assert_eq!(search.mcs(p).unwrap(), search.mcs(p).unwrap());
    }
}

#[test]
fn star_into_path_has_no_full_embedding() {
    let c = config(4, &[(0, 1), (0, 2), (0, 3)]);
    let t = target(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    let values = spot_values(&t).unwrap();
    let search = EmbeddingSearch::new(&c, &t, &values);
    assert!(search.full(IsoParams::unbounded()).is_empty());
    let mcs = search.mcs(IsoParams::unbounded()).unwrap();
    assert_eq!(search.common_size(), 3);
    assert!(mcs.iter().all(|e| e.kind == EmbeddingKind::Mcs && e.size() == 3));
}
