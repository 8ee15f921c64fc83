//! Scenario generation, experiment sweeps and the hand-built case suite.

pub mod cases;
pub mod generate;
pub mod sweep;

pub use cases::{run_cases, CaseFile, CaseReport};
pub use generate::{generate_scenario, GenError, GenParams};
pub use sweep::{run_sweep, SweepKind, SweepParams, SweepReport, SweepRow};
