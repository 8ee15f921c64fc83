//! The bundled case suite.

use msr_plan::bench::run_cases;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/cases");
    for r in run_cases(dir)? {
        println!(
            "{:<26} {:>2} modules  {:>6.3} ms  {} disconnections (listed {})  {}",
            r.name,
            r.modules,
            r.planning_time_ms,
            r.disconnections,
            r.expected_max_disconnections,
            if r.meets_expectation() { "ok" } else { "over" }
        );
    }
    Ok(())
}
