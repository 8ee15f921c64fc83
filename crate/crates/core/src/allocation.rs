//! Spot allocation for singletons (with bounded recursive eviction) and
//! block allocation for connected configurations, both acting on one shared
//! [`AllocationState`].

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::centrality::{spot_values, target_center, MetricsError, SpotValueTable};
use crate::iso::{order_by_utility, Embedding, EmbeddingSearch, IsoParams};
use crate::model::{ConfigId, Configuration, ModelError, Module, ModuleId, Scenario, Spot, SpotId};
use crate::utility::{
    block_utility, module_spot_utility, retention_reward, BlockMember, Overlay, Placement,
};

/// Evictions allowed per spot over a whole planning run. Each accepted
/// eviction chain is bounded by `d_max`; this bounds how many chains the
/// re-selections of evicted modules may trigger in aggregate.
pub const EVICTIONS_PER_SPOT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgoParams {
    /// Maximum number of successive evictions in one chain.
    pub d_max: u32,
    /// Cap on embeddings considered per configuration.
    pub max_embeddings: usize,
    pub max_degree: usize,
}

impl Default for AlgoParams {
    fn default() -> Self {
        Self {
            d_max: 3,
            max_embeddings: 20,
            max_degree: 3,
        }
    }
}

impl AlgoParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.max_embeddings == 0 {
            return Err(ModelError::InvalidParams("max_embeddings must be >= 1".into()));
        }
        if self.max_degree == 0 {
            return Err(ModelError::InvalidParams("max_degree must be >= 1".into()));
        }
        Ok(())
    }

    pub fn iso(&self) -> IsoParams {
        IsoParams {
            max_embeddings: self.max_embeddings,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SelectorKind {
    Singleton,
    BlockMember,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventType {
    PositionBroadcast,
    SelectionBroadcast,
    NoSpotFound,
    Disconnect,
    OccupiedBroadcast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventPayload {
    Position {
        x: f64,
        y: f64,
        theta: f64,
    },
    /// Pairs added to the spot-selector set, and modules whose selection was
    /// cancelled to make room.
    Selection {
        selected: Vec<(SpotId, ModuleId)>,
        evicted: Vec<ModuleId>,
    },
    NoSpotFound,
    Disconnect {
        config: ConfigId,
        severed: Vec<ModuleId>,
    },
    Occupied {
        spot: SpotId,
    },
}

/// One broadcast message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationEvent {
    pub tick: u64,
    pub actor: ModuleId,
    pub event_type: EventType,
    pub payload: EventPayload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Disconnection {
    pub module: ModuleId,
    pub config: ConfigId,
    /// Former configuration neighbors the module detaches from.
    pub severed: Vec<ModuleId>,
}

/// An accepted eviction and the two pairwise utility sums it compared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvictionRecord {
    pub evictor: ModuleId,
    pub evicted: ModuleId,
    pub spot: SpotId,
    pub depth: u32,
    pub with_eviction: f64,
    pub without_eviction: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AllocationState {
    selections: BTreeMap<SpotId, ModuleId>,
    by_module: BTreeMap<ModuleId, SpotId>,
    kinds: BTreeMap<ModuleId, SelectorKind>,
    pub disconnections: Vec<Disconnection>,
    pub evictions: Vec<EvictionRecord>,
    pub event_log: Vec<AllocationEvent>,
    /// Configurations placed as blocks, with the members that kept their links.
    pub blocks: Vec<(ConfigId, Vec<ModuleId>)>,
    pending: Vec<ModuleId>,
    eviction_budget: usize,
    tick: u64,
}

impl Placement for AllocationState {
    fn spot_of(&self, module: ModuleId) -> Option<SpotId> {
        self.by_module.get(&module).copied()
    }
}

impl AllocationState {
    pub fn new(eviction_budget: usize) -> Self {
        Self {
            eviction_budget,
            ..Self::default()
        }
    }

    pub fn selector(&self, spot: SpotId) -> Option<ModuleId> {
        self.selections.get(&spot).copied()
    }

    pub fn kind(&self, module: ModuleId) -> Option<SelectorKind> {
        self.kinds.get(&module).copied()
    }

    pub fn selections(&self) -> &BTreeMap<SpotId, ModuleId> {
        &self.selections
    }

    pub fn selected_count(&self) -> usize {
        self.selections.len()
    }

    pub fn is_block_held(&self, spot: SpotId) -> bool {
        self.selector(spot)
            .is_some_and(|m| self.kind(m) == Some(SelectorKind::BlockMember))
    }

    pub fn eviction_budget(&self) -> usize {
        self.eviction_budget
    }

    /// Both directions of the selection map agree and are injective.
    pub fn is_consistent(&self) -> bool {
        self.selections.len() == self.by_module.len()
            && self
                .selections
                .iter()
                .all(|(s, m)| self.by_module.get(m) == Some(s))
    }

    fn select(&mut self, spot: SpotId, module: ModuleId, kind: SelectorKind) {
        debug_assert!(!self.selections.contains_key(&spot));
        debug_assert!(!self.by_module.contains_key(&module));
        self.selections.insert(spot, module);
        self.by_module.insert(module, spot);
        self.kinds.insert(module, kind);
    }

    fn release(&mut self, module: ModuleId) {
        if let Some(spot) = self.by_module.remove(&module) {
            self.selections.remove(&spot);
        }
        self.kinds.remove(&module);
    }

    /// Appends a broadcast and returns its tick.
    pub fn broadcast(&mut self, actor: ModuleId, event_type: EventType, payload: EventPayload) -> u64 {
        let tick = self.tick;
        self.tick += 1;
        self.event_log.push(AllocationEvent {
            tick,
            actor,
            event_type,
            payload,
        });
        tick
    }
}

/// Everything the allocation procedures read but never change.
pub struct PlanContext<'a> {
    pub scenario: &'a Scenario,
    pub values: SpotValueTable,
    pub center: (f64, f64),
    pub params: AlgoParams,
    module_index: HashMap<ModuleId, usize>,
    spot_index: HashMap<SpotId, usize>,
    links: HashMap<ModuleId, Vec<ModuleId>>,
}

impl<'a> PlanContext<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self, MetricsError> {
        let values = spot_values(&scenario.target)?;
        let center = target_center(&scenario.target)?;
        let mut links: HashMap<ModuleId, Vec<ModuleId>> = HashMap::new();
        for c in &scenario.configurations {
            for &(a, b) in &c.edges {
                links.entry(a).or_default().push(b);
                links.entry(b).or_default().push(a);
            }
        }
        for list in links.values_mut() {
            list.sort_unstable();
        }
        Ok(Self {
            scenario,
            values,
            center,
            params: scenario.algo_params,
            module_index: scenario
                .modules
                .iter()
                .enumerate()
                .map(|(i, m)| (m.id, i))
                .collect(),
            spot_index: scenario.target.index_map(),
            links,
        })
    }

    pub fn with_params(mut self, params: AlgoParams) -> Self {
        self.params = params;
        self
    }

    pub fn module(&self, id: ModuleId) -> &Module {
        &self.scenario.modules[self.module_index[&id]]
    }

    pub fn spot(&self, id: SpotId) -> &Spot {
        &self.scenario.target.spots[self.spot_index[&id]]
    }

    pub fn spots(&self) -> &[Spot] {
        &self.scenario.target.spots
    }

    /// Current physical neighbors of a module in its initial configuration.
    pub fn links(&self, id: ModuleId) -> &[ModuleId] {
        self.links.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn total_modules(&self) -> usize {
        self.scenario.modules.len()
    }

    pub fn fresh_state(&self) -> AllocationState {
        AllocationState::new(EVICTIONS_PER_SPOT * self.spots().len().max(1))
    }

    pub fn utility(&self, module: ModuleId, spot: SpotId, placement: &(impl Placement + ?Sized)) -> f64 {
        module_spot_utility(
            self.module(module),
            self.links(module),
            self.spot(spot),
            &self.values,
            placement,
            &self.scenario.cost_params,
        )
    }

    /// Spots by descending utility for `module`, ties by lower spot id.
    pub fn ranked_spots(&self, module: ModuleId, placement: &(impl Placement + ?Sized)) -> Vec<(SpotId, f64)> {
        let mut ranked: Vec<(SpotId, f64)> = self
            .spots()
            .iter()
            .map(|s| (s.id, self.utility(module, s.id, placement)))
            .collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked
    }

    fn block_members<'b>(&'b self, mapping: &[(ModuleId, SpotId)]) -> Vec<BlockMember<'b>> {
        mapping
            .iter()
            .map(|&(m, s)| BlockMember {
                module: self.module(m),
                links: self.links(m),
                spot: self.spot(s),
            })
            .collect()
    }

    pub fn block_utility(&self, embedding: &Embedding, placement: &(impl Placement + ?Sized)) -> f64 {
        block_utility(
            &self.block_members(&embedding.mapping),
            &self.values,
            placement,
            self.total_modules(),
            &self.scenario.cost_params,
        )
    }

    /// Embeddings by descending block utility against the current state.
    pub fn order_embeddings(
        &self,
        embeddings: Vec<Embedding>,
        state: &AllocationState,
    ) -> Vec<(Embedding, f64)> {
        order_by_utility(embeddings, |e| self.block_utility(e, state))
    }

    /// Total utility of the allocation in `state`: every placed module's
    /// utility plus the retention reward of each block kept together.
    pub fn allocation_utility(&self, state: &AllocationState) -> f64 {
        let singles: f64 = state
            .selections()
            .iter()
            .map(|(&s, &m)| self.utility(m, s, state))
            .sum();
        let rewards: f64 = state
            .blocks
            .iter()
            .map(|(_, members)| retention_reward(members.len(), self.total_modules()))
            .sum();
        singles + rewards
    }

    fn distance_to_center(&self, module: ModuleId) -> f64 {
        self.module(module).pose.distance_to(self.center)
    }
}

/// The eviction acceptance test: the evictor taking the contested spot and
/// the holder moving on must beat the evictor moving on and the holder
/// staying.
pub fn eviction_improves(
    curr_on_contested: f64,
    block_on_alternative: f64,
    curr_on_alternative: f64,
    block_on_contested: f64,
) -> bool {
    curr_on_contested + block_on_alternative > curr_on_alternative + block_on_contested
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionResult {
    Selected(SpotId),
    NoSpotFound,
}

fn best_excluding(
    ctx: &PlanContext<'_>,
    module: ModuleId,
    placement: &(impl Placement + ?Sized),
    excluded: impl Fn(SpotId) -> bool,
) -> Option<(SpotId, f64)> {
    ctx.spots()
        .iter()
        .filter(|s| !excluded(s.id))
        .map(|s| (s.id, ctx.utility(module, s.id, placement)))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
}

/// Tries to cancel `block`'s selection of `contested` in favor of `curr`.
///
/// On success `block` (and every module evicted further down the chain) has
/// lost its selection and is queued to select again. `overlay` holds spots a
/// block in progress is about to take: they count as occupied by a block and
/// are never offered as alternatives.
pub fn evict(
    curr: ModuleId,
    block: ModuleId,
    contested: SpotId,
    depth: u32,
    state: &mut AllocationState,
    ctx: &PlanContext<'_>,
    overlay: &[(ModuleId, SpotId)],
) -> bool {
    if depth >= ctx.params.d_max || state.eviction_budget == 0 {
        return false;
    }
    if state.kind(block) != Some(SelectorKind::Singleton) {
        return false;
    }
    let (block_alt, curr_alt) = {
        let view = Overlay {
            base: &*state,
            mapping: overlay,
        };
        let excluded = |s: SpotId| {
            s == contested || state.is_block_held(s) || overlay.iter().any(|&(_, o)| o == s)
        };
        (
            best_excluding(ctx, block, &view, excluded),
            best_excluding(ctx, curr, &view, excluded),
        )
    };
    let view = Overlay {
        base: &*state,
        mapping: overlay,
    };
    let u_curr_contested = ctx.utility(curr, contested, &view);
    let u_block_contested = ctx.utility(block, contested, &view);
    let u_block_alt = block_alt.map_or(f64::NEG_INFINITY, |(_, u)| u);
    let u_curr_alt = curr_alt.map_or(f64::NEG_INFINITY, |(_, u)| u);
    let Some((block_alt, _)) = block_alt else {
        return false;
    };
    if !eviction_improves(u_curr_contested, u_block_alt, u_curr_alt, u_block_contested) {
        return false;
    }
    match state.selector(block_alt) {
        None => {}
        Some(holder) if holder != curr => {
            if !evict(block, holder, block_alt, depth + 1, state, ctx, overlay) {
                return false;
            }
        }
        Some(_) => return false,
    }
    state.release(block);
    state.pending.push(block);
    state.eviction_budget -= 1;
    state.evictions.push(EvictionRecord {
        evictor: curr,
        evicted: block,
        spot: contested,
        depth,
        with_eviction: u_curr_contested + u_block_alt,
        without_eviction: u_curr_alt + u_block_contested,
    });
    true
}

/// Modules evicted since `mark`, outermost first.
fn take_evicted(state: &mut AllocationState, mark: usize) -> Vec<ModuleId> {
    let mut evicted = state.pending.split_off(mark);
    evicted.reverse();
    evicted
}

/// One singleton selection attempt, without re-running evicted modules.
fn select_once(
    module: ModuleId,
    state: &mut AllocationState,
    ctx: &PlanContext<'_>,
) -> (SelectionResult, Vec<ModuleId>) {
    for (spot, _) in ctx.ranked_spots(module, state) {
        let taken = match state.selector(spot) {
            None => Some(Vec::new()),
            Some(holder)
                if holder != module && state.kind(holder) == Some(SelectorKind::Singleton) =>
            {
                let mark = state.pending.len();
                if evict(module, holder, spot, 0, state, ctx, &[]) {
                    Some(take_evicted(state, mark))
                } else {
                    None
                }
            }
            Some(_) => None,
        };
        if let Some(evicted) = taken {
            state.select(spot, module, SelectorKind::Singleton);
            state.broadcast(
                module,
                EventType::SelectionBroadcast,
                EventPayload::Selection {
                    selected: vec![(spot, module)],
                    evicted: evicted.clone(),
                },
            );
            return (SelectionResult::Selected(spot), evicted);
        }
    }
    state.broadcast(module, EventType::NoSpotFound, EventPayload::NoSpotFound);
    (SelectionResult::NoSpotFound, Vec::new())
}

/// Re-runs selection for evicted modules, depth first.
fn reselect(evicted: Vec<ModuleId>, state: &mut AllocationState, ctx: &PlanContext<'_>) {
    let mut stack: Vec<ModuleId> = evicted.into_iter().rev().collect();
    while let Some(m) = stack.pop() {
        let (_, more) = select_once(m, state, ctx);
        stack.extend(more.into_iter().rev());
    }
}

/// Singleton spot selection: walk spots by descending utility and take the
/// first one that is free or whose singleton holder can be evicted.
pub fn spot_allocation(
    module: ModuleId,
    state: &mut AllocationState,
    ctx: &PlanContext<'_>,
) -> SelectionResult {
    let (result, evicted) = select_once(module, state, ctx);
    reselect(evicted, state, ctx);
    result
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockResult {
    pub embedding: Option<Embedding>,
    /// Members that took their matched spot as part of the block.
    pub placed: Vec<ModuleId>,
    /// Members detached from the configuration and allocated as singletons.
    pub disconnected: Vec<ModuleId>,
    pub evicted: Vec<ModuleId>,
}

/// Evicts the singleton holders of `blocked` for `embedding`. With
/// `all_or_nothing`, any failure rolls the state back and returns `None`;
/// otherwise successes are kept and failed members returned.
fn free_spots(
    embedding: &Embedding,
    state: &mut AllocationState,
    ctx: &PlanContext<'_>,
    all_or_nothing: bool,
) -> Option<Vec<ModuleId>> {
    let snapshot = all_or_nothing.then(|| state.clone());
    let mut failed = Vec::new();
    for &(member, spot) in &embedding.mapping {
        let Some(holder) = state.selector(spot) else {
            continue;
        };
        if !evict(member, holder, spot, 0, state, ctx, &embedding.mapping) {
            if let Some(snapshot) = snapshot {
                *state = snapshot;
                return None;
            }
            failed.push(member);
        }
    }
    Some(failed)
}

fn disconnect(
    module: ModuleId,
    config: &Configuration,
    state: &mut AllocationState,
) {
    let severed: Vec<ModuleId> = config.links_of(module).collect();
    state.disconnections.push(Disconnection {
        module,
        config: config.id,
        severed: severed.clone(),
    });
    state.broadcast(
        module,
        EventType::Disconnect,
        EventPayload::Disconnect {
            config: config.id,
            severed,
        },
    );
}

/// Configuration block selection.
///
/// Candidate images are full embeddings of the configuration, or its maximum
/// common subtrees when none exists, searched over spots not already held by
/// other blocks. Candidates are tried by descending block utility; a
/// candidate is taken if its occupied spots can all be freed by eviction
/// (attempts on a rejected candidate are rolled back). If none works, the
/// best candidate is taken anyway and members whose spots stay occupied are
/// detached. Members outside the chosen image detach too, and every detached
/// member then selects as a singleton in order of distance to the target
/// center.
pub fn block_allocation(
    config: &Configuration,
    state: &mut AllocationState,
    ctx: &PlanContext<'_>,
) -> BlockResult {
    let search = EmbeddingSearch::new(config, &ctx.scenario.target, &ctx.values)
        .restrict_to(|s| !state.is_block_held(s));
    let iso = ctx.params.iso();
    let mut candidates = search.full(iso);
    if candidates.is_empty() {
        candidates = search.mcs(iso).unwrap_or_default();
    }
    let ordered = ctx.order_embeddings(candidates, state);

    let mark = state.pending.len();
    let mut chosen: Option<(Embedding, Vec<ModuleId>)> = None;
    for (embedding, _) in &ordered {
        if let Some(failed) = free_spots(embedding, state, ctx, true) {
            chosen = Some((embedding.clone(), failed));
            break;
        }
    }
    if chosen.is_none() {
        if let Some((best, _)) = ordered.first() {
            let failed = free_spots(best, state, ctx, false).unwrap_or_default();
            chosen = Some((best.clone(), failed));
        }
    }
    let evicted = take_evicted(state, mark);

    let mut placed = Vec::new();
    let mut detached_blocked = Vec::new();
    if let Some((embedding, failed)) = &chosen {
        let mut selected = Vec::new();
        for &(member, spot) in &embedding.mapping {
            if failed.contains(&member) {
                detached_blocked.push(member);
            } else {
                state.select(spot, member, SelectorKind::BlockMember);
                selected.push((spot, member));
                placed.push(member);
            }
        }
        if !selected.is_empty() {
            state.blocks.push((config.id, placed.clone()));
            state.broadcast(
                config.leader,
                EventType::SelectionBroadcast,
                EventPayload::Selection {
                    selected,
                    evicted: evicted.clone(),
                },
            );
        }
    }
    reselect(evicted.clone(), state, ctx);

    let in_image = |m: ModuleId| {
        chosen
            .as_ref()
            .is_some_and(|(e, _)| e.spot_of(m).is_some())
    };
    let by_distance = |mut ms: Vec<ModuleId>| {
        ms.sort_by(|&a, &b| {
            ctx.distance_to_center(a)
                .total_cmp(&ctx.distance_to_center(b))
                .then(a.cmp(&b))
        });
        ms
    };
    let detached_blocked = by_distance(detached_blocked);
    let unmatched = by_distance(
        config
            .members
            .iter()
            .copied()
            .filter(|&m| !in_image(m))
            .collect(),
    );
    let mut disconnected = Vec::new();
    for m in detached_blocked.into_iter().chain(unmatched) {
        disconnect(m, config, state);
        spot_allocation(m, state, ctx);
        disconnected.push(m);
    }

    BlockResult {
        embedding: chosen.map(|(e, _)| e),
        placed,
        disconnected,
        evicted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Pose, TargetConfiguration};

    #[test]
    fn eviction_inequality_examples() {
        // U_curr(s1)=10, U_curr(s2)=2, U_block(s1)=10, U_block(s2)=9
        assert!(eviction_improves(10.0, 9.0, 2.0, 10.0));
        // U_curr(s1)=10, U_curr(s2)=9, U_block(s1)=10, U_block(s2)=2
        assert!(!eviction_improves(10.0, 2.0, 9.0, 10.0));
    }

    fn line_scenario(modules: Vec<Module>, d_max: u32) -> Scenario {
        let n = modules.len();
        let pts: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, 0.0)).collect();
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        Scenario {
            modules,
            configurations: vec![],
            target: TargetConfiguration::from_edges(&pts, &edges),
            cost_params: Default::default(),
            algo_params: AlgoParams {
                d_max,
                ..Default::default()
            },
            seed: 0,
        }
    }

    #[test]
    fn depth_at_limit_refuses() {
        let s = line_scenario(vec![Module::singleton(0, 0.0, 1.0), Module::singleton(1, 0.0, 2.0)], 0);
        let ctx = PlanContext::new(&s).unwrap();
        let mut state = ctx.fresh_state();
        spot_allocation(ModuleId(1), &mut state, &ctx);
        let held = state.spot_of(ModuleId(1)).unwrap();
        assert!(!evict(ModuleId(0), ModuleId(1), held, 0, &mut state, &ctx, &[]));
    }

    #[test]
    fn free_spots_go_to_argmax() {
        let s = line_scenario(
            vec![Module::singleton(0, 2.0, 0.5), Module::singleton(1, 0.0, 3.0), Module::singleton(2, 9.0, 9.0)],
            3,
        );
        let ctx = PlanContext::new(&s).unwrap();
        let mut state = ctx.fresh_state();
        let best = ctx.ranked_spots(ModuleId(0), &state)[0].0;
        assert_eq!(spot_allocation(ModuleId(0), &mut state, &ctx), SelectionResult::Selected(best));
        // The central spot's value outweighs the extra distance.
        assert_eq!(best, SpotId(1));
    }

    #[test]
    fn nearer_module_evicts_when_pair_sum_improves() {
        // a1 takes s0 first; a0 sits on s0 and gains more from it.
        let s = line_scenario(
            vec![
                Module { id: ModuleId(0), pose: Pose::at(0.0, 0.0), config_id: None },
                Module { id: ModuleId(1), pose: Pose::at(0.4, 0.0), config_id: None },
            ],
            3,
        );
        let ctx = PlanContext::new(&s).unwrap();
        let mut state = ctx.fresh_state();
        // a1 alone prefers s0 (0.4 away) over s1 (0.6 away).
        assert_eq!(spot_allocation(ModuleId(1), &mut state, &ctx), SelectionResult::Selected(SpotId(0)));
        assert_eq!(spot_allocation(ModuleId(0), &mut state, &ctx), SelectionResult::Selected(SpotId(0)));
        assert_eq!(state.spot_of(ModuleId(1)), Some(SpotId(1)));
        assert_eq!(state.evictions.len(), 1);
        let r = &state.evictions[0];
        assert!(r.with_eviction > r.without_eviction);
        assert!(state.is_consistent());
    }

    #[test]
    fn no_spot_found_when_all_taken_by_blocks() {
        let s = line_scenario(vec![Module::singleton(0, 0.0, 0.0), Module::singleton(1, 1.0, 0.0)], 3);
        let ctx = PlanContext::new(&s).unwrap();
        let mut state = ctx.fresh_state();
        state.select(SpotId(0), ModuleId(7), SelectorKind::BlockMember);
        state.select(SpotId(1), ModuleId(8), SelectorKind::BlockMember);
        assert_eq!(spot_allocation(ModuleId(0), &mut state, &ctx), SelectionResult::NoSpotFound);
        assert_eq!(state.event_log.last().unwrap().event_type, EventType::NoSpotFound);
    }

    #[test]
    fn block_member_is_never_evicted() {
        let s = line_scenario(vec![Module::singleton(0, 0.0, 0.0), Module::singleton(1, 5.0, 5.0)], 3);
        let ctx = PlanContext::new(&s).unwrap();
        let mut state = ctx.fresh_state();
        state.select(SpotId(0), ModuleId(1), SelectorKind::BlockMember);
        assert!(!evict(ModuleId(0), ModuleId(1), SpotId(0), 0, &mut state, &ctx, &[]));
        // a0's favourite is held by a block, so it settles for the next spot.
        assert_eq!(spot_allocation(ModuleId(0), &mut state, &ctx), SelectionResult::Selected(SpotId(1)));
        assert_eq!(state.selector(SpotId(0)), Some(ModuleId(1)));
    }
}
