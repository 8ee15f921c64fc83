//! A small planning-time sweep printed as CSV.

use msr_plan::bench::{run_sweep, SweepKind, SweepParams};

fn main() {
    let params = SweepParams {
        runs: 10,
        seed: 1,
        points: Some(vec![10, 25, 50, 100]),
        ..SweepParams::default()
    };
    let report = run_sweep(SweepKind::PlanningTime, &params);
    print!("{}", report.to_csv());
    for row in report.series("planning_time") {
        println!("# {} modules: median {:.3} ms", row.x, row.median);
    }
}
