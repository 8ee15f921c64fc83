//! Planning engine and deterministic simulator for forming a target shape
//! out of modular robots.
//!
//! Modules start as singletons or as rigid tree-shaped configurations.
//! Spots of the target are valued by path-count betweenness, configurations
//! claim whole embedded subtrees, singletons claim single spots with bounded
//! recursive eviction, and the acting phase fills the shape center-out.

pub mod allocation;
pub mod auction;
pub mod bench;
pub mod centrality;
pub mod graph;
pub mod io;
pub mod iso;
pub mod model;
pub mod sim;
pub mod utility;

pub use allocation::{
    block_allocation, spot_allocation, AlgoParams, AllocationEvent, AllocationState, EventType,
    PlanContext,
};
pub use auction::{auction_assign, optimal_assignment, AuctionParams, AuctionResult, UtilityMatrix};
pub use centrality::{rank_entities, spot_values, target_center, SpotValueTable};
pub use io::{load_scenario, parse_scenario, save_result, save_scenario, ScenarioError};
pub use iso::{Embedding, EmbeddingKind, EmbeddingSearch, IsoParams};
pub use model::{
    validate_scenario, ConfigId, Configuration, ModelError, Module, ModuleId, Pose, Scenario, Spot,
    SpotId, TargetConfiguration,
};
pub use sim::{run_planning, run_scenario, PlanResult, RunMetrics, SimError};
pub use utility::CostParams;
