//! The center-out order in which modules occupy their spots.

use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::centrality::spot_values;
use msr_plan::sim::{acting_schedule, run_planning, simulate_acting};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = generate_scenario(&GenParams::new(15, 3))?;
    let mut result = run_planning(&scenario)?;
    let values = spot_values(&scenario.target)?;
    let schedule = acting_schedule(&result, &scenario.target, &values)?;
    for (step, spot) in schedule.iter().enumerate() {
        println!(
            "{step:>2}: {spot:?} (value {:.3}) <- {:?}",
            values.get(*spot),
            result.allocation[spot]
        );
    }
    simulate_acting(&mut result, &schedule, &scenario)?;
    println!("total distance {:.2}", result.metrics.total_distance);
    Ok(())
}
