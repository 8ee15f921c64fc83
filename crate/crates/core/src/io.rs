//! Scenario and result files.
//!
//! A scenario is one JSON document with the top-level keys `modules`,
//! `configurations`, `target`, `cost_params`, `algo_params` and `seed`.
//! Unknown keys are rejected at every level. See the README for the full
//! schema.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::AlgoParams;
use crate::model::{
    pick_leader, validate_scenario, ConfigId, Configuration, ModelError, Module, ModuleId, Pose,
    Scenario, Spot, SpotId, TargetConfiguration,
};
use crate::sim::PlanResult;
use crate::utility::CostParams;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

impl From<serde_json::Error> for ScenarioError {
    fn from(e: serde_json::Error) -> Self {
        ScenarioError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ModuleRecord {
    id: u32,
    x: f64,
    y: f64,
    #[serde(default)]
    theta: f64,
    #[serde(default)]
    config_id: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct ConfigRecord {
    id: u32,
    members: Vec<u32>,
    edges: Vec<[u32; 2]>,
    /// Computed from member positions when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    leader: Option<u32>,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct SpotRecord {
    id: u32,
    x: f64,
    y: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    theta: f64,
    neighbors: Vec<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct TargetRecord {
    spots: Vec<SpotRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    modules: Vec<ModuleRecord>,
    #[serde(default)]
    configurations: Vec<ConfigRecord>,
    target: TargetRecord,
    #[serde(default)]
    cost_params: CostParams,
    #[serde(default)]
    algo_params: AlgoParams,
    #[serde(default)]
    seed: u64,
}

impl From<ScenarioFile> for Scenario {
    fn from(f: ScenarioFile) -> Self {
        let modules: Vec<Module> = f
            .modules
            .into_iter()
            .map(|m| Module {
                id: ModuleId(m.id),
                pose: Pose::new(m.x, m.y, m.theta),
                config_id: m.config_id.map(ConfigId),
            })
            .collect();
        let configurations = f
            .configurations
            .into_iter()
            .map(|c| {
                let members: Vec<ModuleId> = c.members.iter().copied().map(ModuleId).collect();
                let leader = c.leader.map(ModuleId).unwrap_or_else(|| {
                    let ms = modules.iter().filter(|m| members.contains(&m.id));
                    pick_leader(ms).or(members.first().copied()).unwrap_or(ModuleId(0))
                });
                Configuration {
                    id: ConfigId(c.id),
                    members,
                    edges: c
                        .edges
                        .iter()
                        .map(|&[a, b]| (ModuleId(a), ModuleId(b)))
                        .collect(),
                    leader,
                }
            })
            .collect();
        let target = TargetConfiguration {
            spots: f
                .target
                .spots
                .into_iter()
                .map(|s| Spot {
                    id: SpotId(s.id),
                    pose: Pose::new(s.x, s.y, s.theta),
                    neighbors: s.neighbors.into_iter().map(SpotId).collect(),
                })
                .collect(),
        };
        Scenario {
            modules,
            configurations,
            target,
            cost_params: f.cost_params,
            algo_params: f.algo_params,
            seed: f.seed,
        }
    }
}

impl From<Scenario> for ScenarioFile {
    fn from(s: Scenario) -> Self {
        ScenarioFile {
            modules: s
                .modules
                .iter()
                .map(|m| ModuleRecord {
                    id: m.id.0,
                    x: m.pose.x,
                    y: m.pose.y,
                    theta: m.pose.theta,
                    config_id: m.config_id.map(|c| c.0),
                })
                .collect(),
            configurations: s
                .configurations
                .iter()
                .map(|c| ConfigRecord {
                    id: c.id.0,
                    members: c.members.iter().map(|m| m.0).collect(),
                    edges: c.edges.iter().map(|&(a, b)| [a.0, b.0]).collect(),
                    leader: Some(c.leader.0),
                })
                .collect(),
            target: TargetRecord {
                spots: s
                    .target
                    .spots
                    .iter()
                    .map(|sp| SpotRecord {
                        id: sp.id.0,
                        x: sp.pose.x,
                        y: sp.pose.y,
                        theta: sp.pose.theta,
                        neighbors: sp.neighbors.iter().map(|n| n.0).collect(),
                    })
                    .collect(),
            },
            cost_params: s.cost_params,
            algo_params: s.algo_params,
            seed: s.seed,
        }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let scenario: Scenario = serde_json::from_str(text)?;
    Ok(validate_scenario(scenario)?)
}

pub fn scenario_to_string(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(scenario).expect("scenario serializes")
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    write_file(path.as_ref(), scenario_to_string(scenario).as_bytes())
}

/// Writes the full spot to module map, metrics, schedule and event log.
pub fn save_result(result: &PlanResult, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    let text = serde_json::to_string_pretty(result).expect("result serializes");
    write_file(path.as_ref(), text.as_bytes())
}

pub fn load_result(path: impl AsRef<Path>) -> Result<PlanResult, ScenarioError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// One JSON record per line, in log order.
pub fn event_log_lines(result: &PlanResult) -> String {
    let mut out = String::new();
    for event in &result.event_log {
        out.push_str(&serde_json::to_string(event).expect("event serializes"));
        out.push('\n');
    }
    out
}

pub fn export_event_log(result: &PlanResult, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    write_file(path.as_ref(), event_log_lines(result).as_bytes())
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ScenarioError> {
    let io_err = |source| ScenarioError::Io {
        path: path.to_owned(),
        source,
    };
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    let mut file = fs::File::create(path).map_err(io_err)?;
    file.write_all(bytes).map_err(io_err)
}
