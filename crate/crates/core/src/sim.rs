//! Turn-sequential simulation of the decentralized protocol.
//!
//! Every module broadcasts its pose, entities take turns in order of distance
//! to the target center, and each selection change is broadcast. Because each
//! decision depends only on broadcast state, running the turns one after the
//! other in rank order gives the same outcome as the asynchronous protocol.
//! The acting phase then fills spots center-out.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::{
    block_allocation, spot_allocation, AllocationEvent, Disconnection, EventPayload, EventType,
    EvictionRecord, PlanContext,
};
use crate::centrality::{rank_entities, EntityRef, MetricsError, SpotValueTable};
use crate::model::{ModuleId, Scenario, SpotId, TargetConfiguration};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("allocation leaves {0} spot(s) unselected")]
    IncompleteAllocation(usize),
    #[error("spot {0} is still empty after the acting phase")]
    HoleDetected(SpotId),
    #[error("spot {0} is scheduled before any of its neighbors")]
    InvalidSchedule(SpotId),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RunMetrics {
    /// Planning phase only, in seconds.
    pub planning_wall_time: f64,
    pub broadcast_count: u64,
    /// Every broadcast expanded to one message per other module.
    pub point_to_point_count: u64,
    pub total_distance: f64,
    /// Modules detached from their initial configuration.
    pub disconnection_count: usize,
    pub eviction_count: usize,
    pub total_utility: f64,
}

/// Progress sample taken after each planning turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgressSample {
    pub elapsed: f64,
    pub events: usize,
    pub selected: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanResult {
    pub allocation: BTreeMap<SpotId, ModuleId>,
    /// True when every spot has been selected.
    pub complete: bool,
    pub metrics: RunMetrics,
    pub event_log: Vec<AllocationEvent>,
    pub acting_schedule: Vec<SpotId>,
    pub disconnections: Vec<Disconnection>,
    pub evictions: Vec<EvictionRecord>,
    pub progress: Vec<ProgressSample>,
}

impl PlanResult {
    /// The event log with one JSON record per line; contains no wall time.
    pub fn event_log_text(&self) -> String {
        crate::io::event_log_lines(self)
    }

    pub fn count(&self, kind: EventType) -> usize {
        self.event_log.iter().filter(|e| e.event_type == kind).count()
    }
}

fn message_counts(events: usize, modules: usize) -> (u64, u64) {
    let b = events as u64;
    (b, b * modules.saturating_sub(1) as u64)
}

/// Runs the planning phase on a validated scenario.
pub fn run_planning(scenario: &Scenario) -> Result<PlanResult, SimError> {
    run_planning_with(scenario, scenario.algo_params)
}

/// As [`run_planning`], overriding the scenario's algorithm parameters.
pub fn run_planning_with(
    scenario: &Scenario,
    params: crate::allocation::AlgoParams,
) -> Result<PlanResult, SimError> {
    let start = Instant::now();
    let ctx = PlanContext::new(scenario)?.with_params(params);
    let mut state = ctx.fresh_state();
    let mut progress = Vec::new();

    let mut modules: Vec<_> = scenario.modules.iter().collect();
    modules.sort_by_key(|m| m.id);
    for m in modules {
        state.broadcast(
            m.id,
            EventType::PositionBroadcast,
            EventPayload::Position {
                x: m.pose.x,
                y: m.pose.y,
                theta: m.pose.theta,
            },
        );
    }

    for entity in rank_entities(scenario, ctx.center).entities() {
        match entity {
            EntityRef::Singleton(m) => {
                spot_allocation(m, &mut state, &ctx);
            }
            EntityRef::Configuration(id) => {
                let config = scenario
                    .configuration(id)
                    .expect("ranked configuration exists");
                if config.len() < 2 {
                    for &m in &config.members {
                        spot_allocation(m, &mut state, &ctx);
                    }
                } else {
                    block_allocation(config, &mut state, &ctx);
                }
            }
        }
        progress.push(ProgressSample {
            elapsed: start.elapsed().as_secs_f64(),
            events: state.event_log.len(),
            selected: state.selected_count(),
        });
    }
    debug_assert!(state.is_consistent());

    let total_utility = ctx.allocation_utility(&state);
    let planning_wall_time = start.elapsed().as_secs_f64();
    let (broadcast_count, point_to_point_count) =
        message_counts(state.event_log.len(), scenario.modules.len());
    let complete = state.selected_count() == scenario.target.len();
    Ok(PlanResult {
        allocation: state.selections().clone(),
        complete,
        metrics: RunMetrics {
            planning_wall_time,
            broadcast_count,
            point_to_point_count,
            total_distance: 0.0,
            disconnection_count: state.disconnections.len(),
            eviction_count: state.evictions.len(),
            total_utility,
        },
        event_log: state.event_log,
        acting_schedule: Vec::new(),
        disconnections: state.disconnections,
        evictions: state.evictions,
        progress,
    })
}

/// Center-out occupation order: the highest-valued spot first, then BFS
/// layers around it, each layer by descending value and lower id.
pub fn acting_schedule(
    result: &PlanResult,
    target: &TargetConfiguration,
    values: &SpotValueTable,
) -> Result<Vec<SpotId>, SimError> {
    let missing = target
        .spots
        .iter()
        .filter(|s| !result.allocation.contains_key(&s.id))
        .count();
    if missing > 0 || target.is_empty() {
        return Err(SimError::IncompleteAllocation(missing));
    }
    Ok(center_out_order(target, values))
}

pub(crate) fn center_out_order(target: &TargetConfiguration, values: &SpotValueTable) -> Vec<SpotId> {
    let first = values.top().expect("non-empty target");
    let index = target.index_map();
    let g = target.adjacency();
    let mut order = Vec::with_capacity(target.len());
    for mut layer in g.bfs_layers(index[&first]) {
        layer.sort_by(|&a, &b| {
            let (sa, sb) = (target.spots[a].id, target.spots[b].id);
            values.get(sb).total_cmp(&values.get(sa)).then(sa.cmp(&sb))
        });
        order.extend(layer.into_iter().map(|i| target.spots[i].id));
    }
    order
}

/// Moves modules onto their spots in schedule order, broadcasting each
/// occupation, and records the total straight-line distance travelled.
pub fn simulate_acting(
    result: &mut PlanResult,
    schedule: &[SpotId],
    scenario: &Scenario,
) -> Result<(), SimError> {
    let target = &scenario.target;
    let mut occupied: BTreeSet<SpotId> = BTreeSet::new();
    let mut total_distance = 0.0;
    let mut tick = result.event_log.last().map_or(0, |e| e.tick + 1);
    for (i, &spot_id) in schedule.iter().enumerate() {
        let spot = target.spot(spot_id).ok_or(SimError::HoleDetected(spot_id))?;
        if i > 0 && !spot.neighbors.iter().any(|n| occupied.contains(n)) {
            return Err(SimError::InvalidSchedule(spot_id));
        }
        let module_id = *result
            .allocation
            .get(&spot_id)
            .ok_or(SimError::HoleDetected(spot_id))?;
        let module = scenario
            .module(module_id)
            .ok_or(SimError::HoleDetected(spot_id))?;
        total_distance += module.pose.distance(&spot.pose);
        occupied.insert(spot_id);
        result.event_log.push(AllocationEvent {
            tick,
            actor: module_id,
            event_type: EventType::OccupiedBroadcast,
            payload: EventPayload::Occupied { spot: spot_id },
        });
        tick += 1;
    }
    if let Some(hole) = target.spots.iter().find(|s| !occupied.contains(&s.id)) {
        return Err(SimError::HoleDetected(hole.id));
    }
    result.acting_schedule = schedule.to_vec();
    result.metrics.total_distance = total_distance;
    let (b, p2p) = message_counts(result.event_log.len(), scenario.modules.len());
    result.metrics.broadcast_count = b;
    result.metrics.point_to_point_count = p2p;
    Ok(())
}

/// Planning plus, when the allocation is complete, the acting phase.
pub fn run_scenario(scenario: &Scenario) -> Result<PlanResult, SimError> {
    run_scenario_with(scenario, scenario.algo_params)
}

pub fn run_scenario_with(
    scenario: &Scenario,
    params: crate::allocation::AlgoParams,
) -> Result<PlanResult, SimError> {
    let mut result = run_planning_with(scenario, params)?;
    if result.complete {
        let values = crate::centrality::spot_values(&scenario.target)?;
        let schedule = acting_schedule(&result, &scenario.target, &values)?;
        simulate_acting(&mut result, &schedule, scenario)?;
    }
    Ok(result)
}
