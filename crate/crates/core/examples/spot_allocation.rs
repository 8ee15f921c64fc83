//! Singleton spot selection with eviction: a latecomer displaces a module
//! when the pair as a whole gains.

use msr_plan::allocation::{spot_allocation, AlgoParams, PlanContext};
use msr_plan::model::{Module, Scenario, TargetConfiguration};

fn main() {
    let target = TargetConfiguration::from_edges(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], &[(0, 1), (1, 2)]);
    let scenario = Scenario {
        modules: vec![
            Module::singleton(0, 1.0, 1.0),
            Module::singleton(1, 1.0, -0.2),
            Module::singleton(2, -3.0, 0.0),
        ],
        configurations: vec![],
        target,
        cost_params: Default::default(),
        algo_params: AlgoParams::default(),
        seed: 0,
    };
    let ctx = PlanContext::new(&scenario).unwrap();
    let mut state = ctx.fresh_state();

    for m in &scenario.modules {
        let result = spot_allocation(m.id, &mut state, &ctx);
        println!("{:?} -> {result:?}", m.id);
        println!("  selections: {:?}", state.selections());
    }
    for e in &state.evictions {
        println!(
            "{:?} evicted {:?} from {:?}: pair utility {:.3} instead of {:.3}",
            e.evictor, e.evicted, e.spot, e.with_eviction, e.without_eviction
        );
    }
    println!("allocation utility: {:.3}", ctx.allocation_utility(&state));
}
