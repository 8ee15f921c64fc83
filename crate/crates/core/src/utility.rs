//! Cost and utility of placing single modules and connected blocks.
//!
//! A module's cost for a spot is its straight-line locomotion cost plus one
//! docking charge per target link at the spot and one undocking charge per
//! link it currently has. A current link whose partner ends up on a
//! neighboring spot is kept as is and charged neither way.

use serde::{Deserialize, Serialize};

use crate::centrality::SpotValueTable;
use crate::model::{ModelError, Module, ModuleId, Pose, Spot, SpotId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    /// Cost per arena unit travelled.
    pub alpha_loc: f64,
    /// Cost per link formed at the destination.
    pub c_dock: f64,
    /// Cost per existing link severed.
    pub c_undock: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            alpha_loc: 1.0,
            c_dock: 0.1,
            c_undock: 0.05,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<(), ModelError> {
        if !(self.alpha_loc.is_finite() && self.alpha_loc > 0.0) {
            return Err(ModelError::InvalidParams("alpha_loc must be > 0".into()));
        }
        if !(self.c_dock.is_finite() && self.c_dock >= 0.0)
            || !(self.c_undock.is_finite() && self.c_undock >= 0.0)
        {
            return Err(ModelError::InvalidParams(
                "docking costs must be finite and >= 0".into(),
            ));
        }
        if self.c_dock <= self.c_undock {
            log::warn!(
                "c_dock ({}) <= c_undock ({}): docking is expected to cost more",
                self.c_dock,
                self.c_undock
            );
        }
        Ok(())
    }
}

/// Where modules currently sit (or are about to sit) in the target.
pub trait Placement {
    fn spot_of(&self, module: ModuleId) -> Option<SpotId>;
}

/// No module placed anywhere.
pub struct NoPlacement;

impl Placement for NoPlacement {
    fn spot_of(&self, _: ModuleId) -> Option<SpotId> {
        None
    }
}

impl Placement for [(ModuleId, SpotId)] {
    fn spot_of(&self, module: ModuleId) -> Option<SpotId> {
        self.iter().find(|(m, _)| *m == module).map(|&(_, s)| s)
    }
}

/// A tentative mapping layered over another placement.
pub struct Overlay<'a, P: Placement + ?Sized> {
    pub base: &'a P,
    pub mapping: &'a [(ModuleId, SpotId)],
}

impl<P: Placement + ?Sized> Placement for Overlay<'_, P> {
    fn spot_of(&self, module: ModuleId) -> Option<SpotId> {
        self.mapping.spot_of(module).or_else(|| self.base.spot_of(module))
    }
}

/// Dock and undock link counts for a module taking a spot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkChanges {
    pub docked: usize,
    pub undocked: usize,
}

/// `links` are the module's current physical neighbors.
pub fn link_changes(
    links: &[ModuleId],
    spot: &Spot,
    placement: &(impl Placement + ?Sized),
) -> LinkChanges {
    let preserved = links
        .iter()
        .filter(|&&other| {
            placement
                .spot_of(other)
                .is_some_and(|s| spot.neighbors.contains(&s))
        })
        .count();
    LinkChanges {
        docked: spot.neighbors.len().saturating_sub(preserved),
        undocked: links.len() - preserved,
    }
}

pub fn locomotion_cost(from: &Pose, to: &Pose, p: &CostParams) -> f64 {
    p.alpha_loc * from.distance(to)
}

pub fn module_spot_cost(
    module: &Module,
    links: &[ModuleId],
    spot: &Spot,
    placement: &(impl Placement + ?Sized),
    p: &CostParams,
) -> f64 {
    let changes = link_changes(links, spot, placement);
    locomotion_cost(&module.pose, &spot.pose, p)
        + p.c_dock * changes.docked as f64
        + p.c_undock * changes.undocked as f64
}

pub fn module_spot_utility(
    module: &Module,
    links: &[ModuleId],
    spot: &Spot,
    values: &SpotValueTable,
    placement: &(impl Placement + ?Sized),
    p: &CostParams,
) -> f64 {
    values.get(spot.id) - module_spot_cost(module, links, spot, placement, p)
}

/// Bonus for keeping `block_size` modules connected, out of `total_modules`.
pub fn retention_reward(block_size: usize, total_modules: usize) -> f64 {
    (block_size as f64 - 2.0) / total_modules as f64
}

/// One mapped member of a block, with everything its cost depends on.
#[derive(Debug, Clone, Copy)]
pub struct BlockMember<'a> {
    pub module: &'a Module,
    pub links: &'a [ModuleId],
    pub spot: &'a Spot,
}

/// Block cost: member costs with the block's own mapping in place, minus the
/// retention reward for the mapped block size.
pub fn block_cost(
    members: &[BlockMember<'_>],
    placement: &(impl Placement + ?Sized),
    total_modules: usize,
    p: &CostParams,
) -> f64 {
    let mapping: Vec<(ModuleId, SpotId)> =
        members.iter().map(|m| (m.module.id, m.spot.id)).collect();
    let view = Overlay {
        base: placement,
        mapping: &mapping,
    };
    members
        .iter()
        .map(|m| module_spot_cost(m.module, m.links, m.spot, &view, p))
        .sum::<f64>()
        - retention_reward(members.len(), total_modules)
}

pub fn block_utility(
    members: &[BlockMember<'_>],
    values: &SpotValueTable,
    placement: &(impl Placement + ?Sized),
    total_modules: usize,
    p: &CostParams,
) -> f64 {
    members.iter().map(|m| values.get(m.spot.id)).sum::<f64>()
        - block_cost(members, placement, total_modules, p)
}
