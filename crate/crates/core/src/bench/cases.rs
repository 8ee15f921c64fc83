//! Hand-built case scenarios with recorded expectations.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::ScenarioError;
use crate::model::{validate_scenario, Scenario};
use crate::sim::{run_scenario, SimError};

/// A case file: a scenario plus the outcome it is expected to reach.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub expected_max_disconnections: usize,
    pub scenario: Scenario,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub name: String,
    pub file: PathBuf,
    pub modules: usize,
    pub spots: usize,
    pub planning_time_ms: f64,
    pub disconnections: usize,
    pub expected_max_disconnections: usize,
    pub no_spot_found: usize,
    pub complete: bool,
}

impl CaseReport {
    pub fn meets_expectation(&self) -> bool {
        self.complete && self.no_spot_found == 0 && self.disconnections <= self.expected_max_disconnections
    }
}

#[derive(Debug, Error)]
pub enum CaseError {
    #[error("case directory {0} holds no .json case files")]
    MissingCases(PathBuf),
    #[error("{0}: {1}")]
    Read(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Scenario(PathBuf, ScenarioError),
    #[error("{0}: {1}")]
    Run(PathBuf, SimError),
}

pub fn load_case(path: &Path) -> Result<CaseFile, CaseError> {
    let text = fs::read_to_string(path).map_err(|e| CaseError::Read(path.to_owned(), e))?;
    let case: CaseFile = serde_json::from_str(&text)
        .map_err(|e| CaseError::Scenario(path.to_owned(), e.into()))?;
    let scenario = validate_scenario(case.scenario)
        .map_err(|e| CaseError::Scenario(path.to_owned(), e.into()))?;
    Ok(CaseFile { scenario, ..case })
}

/// Runs every `*.json` case in `dir`, in file-name order.
pub fn run_cases(dir: impl AsRef<Path>) -> Result<Vec<CaseReport>, CaseError> {
    let dir = dir.as_ref();
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CaseError::Read(dir.to_owned(), e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(CaseError::MissingCases(dir.to_owned()));
    }
    files
        .into_iter()
        .map(|file| {
            let case = load_case(&file)?;
            let result = run_scenario(&case.scenario).map_err(|e| CaseError::Run(file.clone(), e))?;
            Ok(CaseReport {
                name: case.name,
                modules: case.scenario.modules.len(),
                spots: case.scenario.target.len(),
                planning_time_ms: result.metrics.planning_wall_time * 1e3,
                disconnections: result.metrics.disconnection_count,
                expected_max_disconnections: case.expected_max_disconnections,
                no_spot_found: result.count(crate::allocation::EventType::NoSpotFound),
                complete: result.complete,
                file,
            })
        })
        .collect()
}
