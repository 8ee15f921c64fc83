//! Spot valuation by betweenness centrality, the target center, and the
//! distance ranking that fixes the order in which entities select spots.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Adjacency;
use crate::model::{ConfigId, ModuleId, Scenario, SpotId, TargetConfiguration};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("target configuration has no spots")]
    EmptyTarget,
}

/// `Val(s)` for every spot of a target, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SpotValueTable {
    values: BTreeMap<SpotId, f64>,
}

impl SpotValueTable {
    pub fn from_map(values: BTreeMap<SpotId, f64>) -> Self {
        Self { values }
    }

    /// Value of `spot`; 0 for spots the table does not know.
    pub fn get(&self, spot: SpotId) -> f64 {
        self.values.get(&spot).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (SpotId, f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    /// Spot ids by descending value, ties by lower id.
    pub fn descending(&self) -> Vec<SpotId> {
        let mut ids: Vec<SpotId> = self.values.keys().copied().collect();
        ids.sort_by(|a, b| self.get(*b).total_cmp(&self.get(*a)).then(a.cmp(b)));
        ids
    }

    /// Highest-valued spot, ties by lower id.
    pub fn top(&self) -> Option<SpotId> {
        self.descending().first().copied()
    }
}

/// Betweenness value of every spot.
///
/// For spot `i`, the value is the number of shortest paths between unordered
/// pairs `{j, k}` (neither equal to `i`) that pass through `i`, divided by the
/// total number of shortest paths between those same pairs. On a tree every
/// pair has exactly one path, so this is the fraction of other pairs routed
/// through `i`.
pub fn spot_values(target: &TargetConfiguration) -> Result<SpotValueTable, MetricsError> {
    if target.is_empty() {
        return Err(MetricsError::EmptyTarget);
    }
    let g = target.adjacency();
    let ratios = path_count_betweenness(&g);
    Ok(SpotValueTable::from_map(
        target
            .spots
            .iter()
            .zip(ratios)
            .map(|(s, v)| (s.id, v))
            .collect(),
    ))
}

/// Brandes-style accumulation of shortest-path counts.
///
/// From each source `s` a BFS gives `sigma[s][v]` and the shortest-path DAG.
/// Walking the DAG back from the farthest layer, `reach[v]` accumulates the
/// number of DAG paths leaving `v` (one per endpoint reached, through any
/// successor), so `sigma[s][v] * reach[v]` counts the shortest paths from `s`
/// that pass through `v` and end elsewhere.
fn path_count_betweenness(g: &Adjacency) -> Vec<f64> {
    let n = g.len();
    let mut through = vec![0.0f64; n];
    // sum_sigma[v] = sum over t != v of sigma(v, t)
    let mut sum_sigma = vec![0.0f64; n];
    let mut total = 0.0f64;

    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut reach = vec![0.0f64; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();

    for s in 0..n {
        sigma.iter_mut().for_each(|x| *x = 0.0);
        dist.iter_mut().for_each(|x| *x = usize::MAX);
        reach.iter_mut().for_each(|x| *x = 0.0);
        order.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        for &v in order.iter().rev() {
            for &w in g.neighbors(v) {
                if dist[w] != usize::MAX && dist[w] == dist[v] + 1 {
                    reach[v] += 1.0 + reach[w];
                }
            }
            if v != s {
                through[v] += sigma[v] * reach[v];
                sum_sigma[s] += sigma[v];
            }
        }
        total += order.iter().filter(|&&v| v != s).map(|&v| sigma[v]).sum::<f64>();
    }

    // Ordered pairs were counted twice.
    let total = total / 2.0;
    (0..n)
        .map(|i| {
            let numerator = through[i] / 2.0;
            let denominator = total - sum_sigma[i];
            if denominator > 0.0 {
                (numerator / denominator).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect()
}

/// Mean of all spot positions.
pub fn target_center(target: &TargetConfiguration) -> Result<(f64, f64), MetricsError> {
    if target.is_empty() {
        return Err(MetricsError::EmptyTarget);
    }
    let n = target.len() as f64;
    let (sx, sy) = target
        .spots
        .iter()
        .fold((0.0, 0.0), |(x, y), s| (x + s.pose.x, y + s.pose.y));
    Ok((sx / n, sy / n))
}

/// Something that takes a turn in the planning phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityRef {
    // Declaration order is the tie-break: configurations before singletons.
    Configuration(ConfigId),
    Singleton(ModuleId),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub entity: EntityRef,
    pub distance: f64,
}

/// Entities ordered by distance to the target center, ascending.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RankList(pub Vec<RankEntry>);

impl RankList {
    pub fn entities(&self) -> impl Iterator<Item = EntityRef> + '_ {
        self.0.iter().map(|e| e.entity)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Ranks singletons by their own pose and configurations by their leader's
/// pose. Equal distances put configurations first, then lower ids.
pub fn rank_entities(scenario: &Scenario, center: (f64, f64)) -> RankList {
    let mut entries: Vec<RankEntry> = Vec::new();
    for m in scenario.singletons() {
        entries.push(RankEntry {
            entity: EntityRef::Singleton(m.id),
            distance: m.pose.distance_to(center),
        });
    }
    for c in &scenario.configurations {
        if let Some(leader) = scenario.module(c.leader) {
            entries.push(RankEntry {
                entity: EntityRef::Configuration(c.id),
                distance: leader.pose.distance_to(center),
            });
        }
    }
    entries.sort_by(|a, b| {
        a.distance
            .total_cmp(&b.distance)
            .then(a.entity.cmp(&b.entity))
    });
    RankList(entries)
}
