//! Betweenness values of a small target and the resulting spot ranking.

use msr_plan::centrality::{spot_values, target_center};
use msr_plan::model::TargetConfiguration;

fn main() {
    // A "T": a four-spot bar with a two-spot stem below its second spot.
    let points = [(0.0, 2.0), (1.0, 2.0), (2.0, 2.0), (3.0, 2.0), (1.0, 1.0), (1.0, 0.0)];
    let edges = [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)];
    let target = TargetConfiguration::from_edges(&points, &edges);

    let values = spot_values(&target).expect("non-empty target");
    for (spot, value) in values.iter() {
        println!("{spot:?}: {value:.3}");
    }
    println!("highest valued spot: {:?}", values.top().unwrap());
    println!("descending: {:?}", values.descending());
    println!("center: {:?}", target_center(&target).unwrap());
}
