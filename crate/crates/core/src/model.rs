//! Domain types for modules, configurations and the target shape, plus
//! scenario validation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::AlgoParams;
use crate::graph::Adjacency;
use crate::utility::CostParams;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(
            Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
        )]
        #[serde(transparent)]
        pub struct $name(pub u32);

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// Unique identifier of a robot module.
    ModuleId,
    "a"
);
id_type!(
    /// Identifier of a spot in the target configuration.
    SpotId,
    "s"
);
id_type!(
    /// Identifier of an initial configuration.
    ConfigId,
    "A"
);

/// Planar pose. `theta` is carried through the model but no cost term reads it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose {
    pub const fn new(x: f64, y: f64, theta: f64) -> Self {
        Self { x, y, theta }
    }

    pub const fn at(x: f64, y: f64) -> Self {
        Self { x, y, theta: 0.0 }
    }

    pub fn distance(&self, other: &Pose) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_to(&self, (x, y): (f64, f64)) -> f64 {
        (self.x - x).hypot(self.y - y)
    }

    fn is_valid(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && (0.0..=PI).contains(&self.theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Module {
    pub id: ModuleId,
    pub pose: Pose,
    /// `None` for a singleton.
    pub config_id: Option<ConfigId>,
}

impl Module {
    pub fn singleton(id: u32, x: f64, y: f64) -> Self {
        Self {
            id: ModuleId(id),
            pose: Pose::at(x, y),
            config_id: None,
        }
    }

    pub fn is_singleton(&self) -> bool {
        self.config_id.is_none()
    }
}

/// A tree of physically connected modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub id: ConfigId,
    pub members: Vec<ModuleId>,
    pub edges: Vec<(ModuleId, ModuleId)>,
    pub leader: ModuleId,
}

impl Configuration {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: ModuleId) -> bool {
        self.members.contains(&id)
    }

    /// Neighbors of `id` inside this configuration.
    pub fn links_of(&self, id: ModuleId) -> impl Iterator<Item = ModuleId> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == id {
                Some(b)
            } else if b == id {
                Some(a)
            } else {
                None
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spot {
    pub id: SpotId,
    pub pose: Pose,
    pub neighbors: Vec<SpotId>,
}

/// The shape to be formed: a tree of spots.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TargetConfiguration {
    pub spots: Vec<Spot>,
}

impl TargetConfiguration {
    /// Builds a target from spot positions and an undirected edge list.
    pub fn from_edges(points: &[(f64, f64)], edges: &[(u32, u32)]) -> Self {
        let mut spots: Vec<Spot> = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| Spot {
                id: SpotId(i as u32),
                pose: Pose::at(x, y),
                neighbors: Vec::new(),
            })
            .collect();
        for &(a, b) in edges {
            spots[a as usize].neighbors.push(SpotId(b));
            spots[b as usize].neighbors.push(SpotId(a));
        }
        for spot in &mut spots {
            spot.neighbors.sort_unstable();
        }
        Self { spots }
    }

    pub fn len(&self) -> usize {
        self.spots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spots.is_empty()
    }

    pub fn spot(&self, id: SpotId) -> Option<&Spot> {
        self.spots.iter().find(|s| s.id == id)
    }

    pub fn index_map(&self) -> HashMap<SpotId, usize> {
        self.spots.iter().enumerate().map(|(i, s)| (s.id, i)).collect()
    }

    /// Adjacency over spot indices (position in `spots`). Neighbor ids that do
    /// not resolve are skipped; validation reports them.
    pub fn adjacency(&self) -> Adjacency {
        let index = self.index_map();
        let mut g = Adjacency::new(self.spots.len());
        for (i, spot) in self.spots.iter().enumerate() {
            for n in &spot.neighbors {
                if let Some(&j) = index.get(n) {
                    if i < j {
                        g.add_edge(i, j);
                    } else if i == j {
                        g.add_edge(i, i);
                    }
                }
            }
        }
        g.sort_neighbors();
        g
    }

    pub fn edges(&self) -> Vec<(SpotId, SpotId)> {
        let mut out = Vec::new();
        for spot in &self.spots {
            for &n in &spot.neighbors {
                if spot.id < n {
                    out.push((spot.id, n));
                }
            }
        }
        out
    }
}

/// One planning problem: modules, their initial configurations and the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "crate::io::ScenarioFile", into = "crate::io::ScenarioFile")]
pub struct Scenario {
    pub modules: Vec<Module>,
    pub configurations: Vec<Configuration>,
    pub target: TargetConfiguration,
    pub cost_params: CostParams,
    pub algo_params: AlgoParams,
    pub seed: u64,
}

impl Scenario {
    pub fn module(&self, id: ModuleId) -> Option<&Module> {
        self.modules.iter().find(|m| m.id == id)
    }

    pub fn configuration(&self, id: ConfigId) -> Option<&Configuration> {
        self.configurations.iter().find(|c| c.id == id)
    }

    pub fn singletons(&self) -> impl Iterator<Item = &Module> {
        self.modules.iter().filter(|m| m.is_singleton())
    }

    pub fn is_singleton_only(&self) -> bool {
        self.configurations.is_empty()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        validate_parts(self)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("scenario has no modules")]
    NoModules,
    #[error("target configuration has no spots")]
    EmptyTarget,
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: u32 },
    #[error("dangling reference: {0}")]
    DanglingReference(String),
    #[error("{0} is not a tree")]
    NotATree(String),
    #[error("{what} vertex {id} has degree {degree}, max is {max}")]
    DegreeExceeded {
        what: String,
        id: u32,
        degree: usize,
        max: usize,
    },
    #[error("spot {spot} lists {neighbor} as neighbor but not vice versa")]
    AsymmetricNeighbor { spot: SpotId, neighbor: SpotId },
    #[error("module {0} does not belong to the configuration it names, or belongs to several")]
    MembershipMismatch(ModuleId),
    #[error("invalid pose for {0}")]
    InvalidPose(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Returns the scenario iff every structural invariant holds.
pub fn validate_scenario(raw: Scenario) -> Result<Scenario, ModelError> {
    raw.validate()?;
    Ok(raw)
}

/// Member closest to the centroid of the member positions; ties go to the
/// lowest module id.
pub fn pick_leader<'a>(members: impl IntoIterator<Item = &'a Module>) -> Option<ModuleId> {
    let members: Vec<&Module> = members.into_iter().collect();
    if members.is_empty() {
        return None;
    }
    let n = members.len() as f64;
    let cx = members.iter().map(|m| m.pose.x).sum::<f64>() / n;
    let cy = members.iter().map(|m| m.pose.y).sum::<f64>() / n;
    members
        .iter()
        .map(|m| (m.pose.distance_to((cx, cy)), m.id))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, id)| id)
}

fn validate_parts(s: &Scenario) -> Result<(), ModelError> {
    if s.modules.is_empty() {
        return Err(ModelError::NoModules);
    }
    if s.target.spots.is_empty() {
        return Err(ModelError::EmptyTarget);
    }
    s.cost_params.validate()?;
    s.algo_params.validate()?;
    let max_degree = s.algo_params.max_degree;

    let mut module_ids = BTreeMap::new();
    for m in &s.modules {
        if module_ids.insert(m.id, m).is_some() {
            return Err(ModelError::DuplicateId {
                kind: "module",
                id: m.id.0,
            });
        }
        if !m.pose.is_valid() {
            return Err(ModelError::InvalidPose(m.id.to_string()));
        }
    }

    let mut config_ids = BTreeSet::new();
    let mut owner: BTreeMap<ModuleId, ConfigId> = BTreeMap::new();
    for c in &s.configurations {
        if !config_ids.insert(c.id) {
            return Err(ModelError::DuplicateId {
                kind: "configuration",
                id: c.id.0,
            });
        }
        validate_configuration(c, &module_ids, max_degree)?;
        for &m in &c.members {
            if owner.insert(m, c.id).is_some() {
                return Err(ModelError::MembershipMismatch(m));
            }
        }
    }
    for m in &s.modules {
        if m.config_id != owner.get(&m.id).copied() {
            if let Some(c) = m.config_id {
                if !config_ids.contains(&c) {
                    return Err(ModelError::DanglingReference(format!(
                        "module {} names unknown configuration {}",
                        m.id, c
                    )));
                }
            }
            return Err(ModelError::MembershipMismatch(m.id));
        }
    }

    validate_target(&s.target, max_degree)
}

fn validate_configuration(
    c: &Configuration,
    modules: &BTreeMap<ModuleId, &Module>,
    max_degree: usize,
) -> Result<(), ModelError> {
    let mut index = HashMap::new();
    for (i, &m) in c.members.iter().enumerate() {
        if !modules.contains_key(&m) {
            return Err(ModelError::DanglingReference(format!(
                "configuration {} lists unknown module {}",
                c.id, m
            )));
        }
        if index.insert(m, i).is_some() {
            return Err(ModelError::DuplicateId {
                kind: "configuration member",
                id: m.0,
            });
        }
    }
    if !index.contains_key(&c.leader) {
        return Err(ModelError::DanglingReference(format!(
            "leader {} of {} is not a member",
            c.leader, c.id
        )));
    }
    let mut g = Adjacency::new(c.members.len());
    for &(a, b) in &c.edges {
        let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) else {
            return Err(ModelError::DanglingReference(format!(
                "edge ({a}, {b}) of {} leaves the configuration",
                c.id
            )));
        };
        g.add_edge(ia, ib);
    }
    if !g.is_tree() {
        return Err(ModelError::NotATree(format!("configuration {}", c.id)));
    }
    for (i, &m) in c.members.iter().enumerate() {
        if g.degree(i) > max_degree {
            return Err(ModelError::DegreeExceeded {
                what: format!("configuration {}", c.id),
                id: m.0,
                degree: g.degree(i),
                max: max_degree,
            });
        }
    }
    Ok(())
}

fn validate_target(t: &TargetConfiguration, max_degree: usize) -> Result<(), ModelError> {
    let mut ids: BTreeMap<SpotId, &Spot> = BTreeMap::new();
    for spot in &t.spots {
        if ids.insert(spot.id, spot).is_some() {
            return Err(ModelError::DuplicateId {
                kind: "spot",
                id: spot.id.0,
            });
        }
        if !spot.pose.is_valid() {
            return Err(ModelError::InvalidPose(spot.id.to_string()));
        }
    }
    for spot in &t.spots {
        for n in &spot.neighbors {
            let Some(other) = ids.get(n) else {
                return Err(ModelError::DanglingReference(format!(
                    "spot {} lists unknown neighbor {}",
                    spot.id, n
                )));
            };
            if *n == spot.id {
                return Err(ModelError::NotATree(format!(
                    "target (self-neighbor at {})",
                    spot.id
                )));
            }
            if !other.neighbors.contains(&spot.id) {
                return Err(ModelError::AsymmetricNeighbor {
                    spot: spot.id,
                    neighbor: *n,
                });
            }
        }
    }
    let g = t.adjacency();
    if !g.is_tree() {
        return Err(ModelError::NotATree("target".into()));
    }
    for (i, spot) in t.spots.iter().enumerate() {
        if g.degree(i) > max_degree {
            return Err(ModelError::DegreeExceeded {
                what: "target".into(),
                id: spot.id.0,
                degree: g.degree(i),
                max: max_degree,
            });
        }
    }
    Ok(())
}
