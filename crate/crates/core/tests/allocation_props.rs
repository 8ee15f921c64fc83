mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{config, permutations, target, tree_strategy};
use msr_plan::allocation::{
    block_allocation, eviction_improves, spot_allocation, AlgoParams, AllocationState, EventPayload,
    PlanContext, SelectorKind,
};
use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::centrality::{rank_entities, spot_values, EntityRef};
use msr_plan::iso::{EmbeddingSearch, IsoParams};
use msr_plan::model::{ModuleId, Scenario, SpotId};
use msr_plan::sim::run_planning_with;
use msr_plan::utility::{module_spot_cost, retention_reward, CostParams, NoPlacement, Overlay};
use proptest::prelude::*;

/// Runs every entity's turn, calling `check` after each one.
fn plan_stepwise(
    scenario: &Scenario,
    params: AlgoParams,
    mut check: impl FnMut(&AllocationState, &PlanContext<'_>),
) -> AllocationState {
    let ctx = PlanContext::new(scenario).unwrap().with_params(params);
    let mut state = ctx.fresh_state();
    for entity in rank_entities(scenario, ctx.center).entities() {
        match entity {
            EntityRef::Singleton(m) => {
                spot_allocation(m, &mut state, &ctx);
            }
            EntityRef::Configuration(id) => {
                let c = scenario.configuration(id).unwrap();
                if c.len() < 2 {
                    spot_allocation(c.members[0], &mut state, &ctx);
                } else {
                    block_allocation(c, &mut state, &ctx);
                }
            }
        }
        check(&state, &ctx);
    }
    state
}

fn block_members(state: &AllocationState) -> BTreeMap<ModuleId, SpotId> {
    state
        .selections()
        .iter()
        .filter(|(_, &m)| state.kind(m) == Some(SelectorKind::BlockMember))
        .map(|(&s, &m)| (m, s))
        .collect()
}

fn scenario_strategy(lo: usize, hi: usize) -> impl Strategy<Value = Scenario> {
    (lo..=hi, any::<u64>()).prop_map(|(n, seed)| generate_scenario(&GenParams::new(n, seed)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn selections_stay_injective_and_blocks_stay_put(s in scenario_strategy(2, 30)) {
        let mut held: BTreeMap<ModuleId, SpotId> = BTreeMap::new();
        let state = plan_stepwise(&s, s.algo_params, |state, _| {
            assert!(state.is_consistent());
            let now = block_members(state);
            for (m, spot) in &held {
                assert_eq!(now.get(m), Some(spot), "block member {m:?} moved");
            }
            held = now;
        });
        let modules: BTreeSet<_> = state.selections().values().collect();
        prop_assert_eq!(modules.len(), state.selected_count());
        prop_assert_eq!(state.selected_count(), s.target.len());
    }

    #[test]
    fn evictions_satisfy_the_acceptance_inequality(s in scenario_strategy(4, 30), d_max in 0u32..6) {
        let params = AlgoParams { d_max, ..s.algo_params };
        let state = plan_stepwise(&s, params, |_, _| {});
        if d_max == 0 {
            prop_assert!(state.evictions.is_empty());
        }
        prop_assert!(state.evictions.len() <= msr_plan::allocation::EVICTIONS_PER_SPOT * s.target.len());
        for e in &state.evictions {
            prop_assert!(e.with_eviction > e.without_eviction);
            prop_assert!(e.depth < d_max);
        }
    }

    #[test]
    fn block_members_form_valid_embeddings(s in scenario_strategy(4, 30)) {
        let state = plan_stepwise(&s, s.algo_params, |_, _| {});
        let placed: BTreeMap<ModuleId, SpotId> =
            state.selections().iter().map(|(&sp, &m)| (m, sp)).collect();
        for (id, members) in &state.blocks {
            let c = s.configuration(*id).unwrap();
            prop_assert!(!members.is_empty() && members.iter().all(|&m| c.contains(m)));
            for &(a, b) in &c.edges {
                if members.contains(&a) && members.contains(&b) {
                    let sa = s.target.spot(placed[&a]).unwrap();
                    prop_assert!(sa.neighbors.contains(&placed[&b]), "link {a:?}-{b:?} not preserved");
                }
            }
        }
        // Every detached module belongs to a configuration and severed only its own links.
        for d in &state.disconnections {
            let c = s.configuration(d.config).unwrap();
            prop_assert!(c.contains(d.module));
            let links: BTreeSet<_> = c.links_of(d.module).collect();
            prop_assert_eq!(links, d.severed.iter().copied().collect::<BTreeSet<_>>());
        }
        // Selection broadcasts never list a module as both placed and evicted.
        for ev in &state.event_log {
            if let EventPayload::Selection { selected, evicted } = &ev.payload {
                for (_, m) in selected {
                    prop_assert!(!evicted.contains(m));
                }
            }
        }
    }

    #[test]
    fn singleton_allocations_are_pareto_optimal(n in 1usize..=6, seed in any::<u64>()) {
        let s = generate_scenario(&GenParams::new(n, seed).singletons_only()).unwrap();
        let state = plan_stepwise(&s, s.algo_params, |_, _| {});
        let ctx = PlanContext::new(&s).unwrap();
        let mut modules: Vec<ModuleId> = s.modules.iter().map(|m| m.id).collect();
        modules.sort_unstable();
        let spots: Vec<SpotId> = s.target.spots.iter().map(|sp| sp.id).collect();
        let by_module: BTreeMap<ModuleId, SpotId> =
            state.selections().iter().map(|(&sp, &m)| (m, sp)).collect();
        let mine: Vec<f64> = modules
            .iter()
            .map(|&m| ctx.utility(m, by_module[&m], &NoPlacement))
            .collect();
        for p in permutations(n) {
            let alt: Vec<f64> = modules
                .iter()
                .enumerate()
                .map(|(i, &m)| ctx.utility(m, spots[p[i]], &NoPlacement))
                .collect();
            let weakly = alt.iter().zip(&mine).all(|(a, b)| a >= b);
            let strictly = alt.iter().zip(&mine).any(|(a, b)| a > b);
            prop_assert!(!(weakly && strictly), "Pareto improvement {p:?}");
        }
    }

    #[test]
    fn planning_matches_stepwise_replay(s in scenario_strategy(2, 20)) {
        let state = plan_stepwise(&s, s.algo_params, |_, _| {});
        let result = run_planning_with(&s, s.algo_params).unwrap();
        prop_assert_eq!(&result.allocation, state.selections());
        prop_assert_eq!(result.disconnections.len(), state.disconnections.len());
    }

    /// Block utility exceeds the members' own utilities by the retention reward.
    #[test]
    fn block_utility_identity(
        (nc, ce) in tree_strategy(1, 6),
        (nt, te) in tree_strategy(1, 10),
        seed in any::<u64>(),
    ) {
        let mut s = generate_scenario(&GenParams::new(nt, seed).singletons_only()).unwrap();
        s.target = target(nt, &te);
        let c = config(nc, &ce);
        s.modules.truncate(nc.min(s.modules.len()));
        prop_assume!(s.modules.len() == nc);
        let ctx = PlanContext::new(&s).unwrap();
        let values = spot_values(&s.target).unwrap();
        let embeddings = EmbeddingSearch::new(&c, &s.target, &values).mcs(IsoParams::default()).unwrap();
        for e in embeddings {
            let view = Overlay { base: &NoPlacement, mapping: &e.mapping };
            let singles: f64 = e.mapping.iter().map(|&(m, sp)| ctx.utility(m, sp, &view)).sum();
            let reward = retention_reward(e.size(), nc);
            prop_assert!((ctx.block_utility(&e, &NoPlacement) - singles - reward).abs() < 1e-9);
        }
    }

    /// Mapping a whole configuration onto a subtree docks only boundary links.
    #[test]
    fn preserved_links_cost_nothing(
        (nc, ce) in tree_strategy(2, 6),
        (nt, te) in tree_strategy(2, 10),
    ) {
        let t = target(nt, &te);
        let c = config(nc, &ce);
        let values = spot_values(&t).unwrap();
        let p = CostParams::default();
        let links: BTreeMap<ModuleId, Vec<ModuleId>> =
            c.members.iter().map(|&m| (m, c.links_of(m).collect())).collect();
        for e in EmbeddingSearch::new(&c, &t, &values).full(IsoParams::default()) {
            let image: BTreeSet<SpotId> = e.spots().collect();
            let boundary = t
                .edges()
                .iter()
                .filter(|(a, b)| image.contains(a) != image.contains(b))
                .count();
            let mut link_cost = 0.0;
            for &(m, sp) in &e.mapping {
                let module = msr_plan::model::Module::singleton(m.0, 0.0, 0.0);
                let spot = t.spot(sp).unwrap();
                let total = module_spot_cost(&module, &links[&m], spot, e.mapping.as_slice(), &p);
                let loco = p.alpha_loc * module.pose.distance(&spot.pose);
                prop_assert!(total >= loco);
                link_cost += total - loco;
            }
            prop_assert!((link_cost - p.c_dock * boundary as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn retention_reward_grows_with_block_size() {
    for total in 1..50 {
        for k in 1..total {
            assert!(retention_reward(k + 1, total) > retention_reward(k, total));
        }
    }
}

#[test]
fn acceptance_inequality_is_strict() {
    assert!(eviction_improves(2.0, 1.0, 1.5, 1.0));
    assert!(!eviction_improves(1.0, 1.0, 1.0, 1.0));
}
