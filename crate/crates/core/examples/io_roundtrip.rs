//! Scenario and result documents on disk, and the event log as JSON lines.

use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::io::{event_log_lines, load_result, load_scenario, save_result, save_scenario};
use msr_plan::run_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("msr-plan-example");
    let scenario = generate_scenario(&GenParams::new(8, 2))?;
    let path = dir.join("scenario.json");
    save_scenario(&scenario, &path)?;
    assert_eq!(load_scenario(&path)?, scenario);
    println!("wrote {}", path.display());

    let result = run_scenario(&scenario)?;
    let rpath = dir.join("result.json");
    save_result(&result, &rpath)?;
    assert_eq!(load_result(&rpath)?, result);
    println!("wrote {}", rpath.display());

    for line in event_log_lines(&result).lines().take(5) {
        println!("{line}");
    }
    println!("... {} events", result.event_log.len());
    Ok(())
}
