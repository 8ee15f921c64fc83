//! Spot allocation against the auction baseline and the exact optimum on one
//! singleton-only scenario.

use msr_plan::allocation::PlanContext;
use msr_plan::auction::{auction_scenario, optimal_assignment, UtilityMatrix};
use msr_plan::bench::{generate_scenario, GenParams};
use msr_plan::sim::run_planning;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scenario = generate_scenario(&GenParams::new(30, 11).singletons_only())?;
    let spot = run_planning(&scenario)?;
    let auction = auction_scenario(&scenario)?;
    let ctx = PlanContext::new(&scenario)?;
    let optimum = optimal_assignment(&UtilityMatrix::for_scenario(&ctx));

    println!("{:<16}{:>12}{:>12}", "", "utility", "broadcasts");
    println!("{:<16}{:>12.4}{:>12}", "spot allocation", spot.metrics.total_utility, spot.metrics.broadcast_count);
    println!("{:<16}{:>12.4}{:>12}", "auction", auction.total_utility, auction.broadcast_count);
    println!("{:<16}{:>12.4}{:>12}", "optimum", optimum.total_utility, "-");
    println!("auction: {} rounds, {} bids, epsilon {:.4}", auction.rounds, auction.bids, auction.epsilon);
    Ok(())
}
