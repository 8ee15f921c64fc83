//! Plan and act one scenario: a file given as the first argument, or a
//! generated one.

use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::io::load_scenario;
use msr_plan::run_scenario;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = match std::env::args().nth(1) {
        Some(path) => load_scenario(path)?,
        None => generate_scenario(&GenParams::new(40, 7))?,
    };
    let result = run_scenario(&scenario)?;
    let m = &result.metrics;
    println!("modules {}, spots {}", scenario.modules.len(), scenario.target.len());
    println!("complete: {}", result.complete);
    println!("planning time: {:.3} ms", m.planning_wall_time * 1e3);
    println!("broadcasts: {} ({} point-to-point)", m.broadcast_count, m.point_to_point_count);
    println!("evictions: {}, disconnections: {}", m.eviction_count, m.disconnection_count);
    println!("distance travelled: {:.2}", m.total_distance);
    println!("utility: {:.4}", m.total_utility);
    for d in &result.disconnections {
        println!("  {:?} left {:?}, severing {:?}", d.module, d.config, d.severed);
    }
    Ok(())
}
