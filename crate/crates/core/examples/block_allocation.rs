//! A connected configuration claims a matching part of the target as a block.

use msr_plan::allocation::{block_allocation, AlgoParams, PlanContext};
use msr_plan::model::{ConfigId, Configuration, Module, ModuleId, Pose, Scenario, TargetConfiguration};

fn main() {
    let points: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 0.0)).collect();
    let target = TargetConfiguration::from_edges(&points, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    // Only topology matters: the bent trio is still a path and fits whole.
    let trio: Vec<Module> = [(0, 6.0, 3.0), (1, 7.0, 3.0), (2, 7.0, 4.0)]
        .iter()
        .map(|&(id, x, y)| Module { id: ModuleId(id), pose: Pose::at(x, y), config_id: Some(ConfigId(0)) })
        .collect();
    let pair: Vec<Module> = [(3, 0.0, 2.0), (4, 1.0, 2.0)]
        .iter()
        .map(|&(id, x, y)| Module { id: ModuleId(id), pose: Pose::at(x, y), config_id: Some(ConfigId(1)) })
        .collect();
    let scenario = Scenario {
        modules: trio.into_iter().chain(pair).collect(),
        configurations: vec![
            Configuration {
                id: ConfigId(0),
                members: vec![ModuleId(0), ModuleId(1), ModuleId(2)],
                edges: vec![(ModuleId(0), ModuleId(1)), (ModuleId(1), ModuleId(2))],
                leader: ModuleId(1),
            },
            Configuration {
                id: ConfigId(1),
                members: vec![ModuleId(3), ModuleId(4)],
                edges: vec![(ModuleId(3), ModuleId(4))],
                leader: ModuleId(3),
            },
        ],
        target,
        cost_params: Default::default(),
        algo_params: AlgoParams::default(),
        seed: 0,
    };
    let scenario = msr_plan::model::validate_scenario(scenario).expect("valid scenario");
    let ctx = PlanContext::new(&scenario).unwrap();
    let mut state = ctx.fresh_state();

    for config in &scenario.configurations {
        let r = block_allocation(config, &mut state, &ctx);
        let e = r.embedding.as_ref().unwrap();
        println!("{:?}: {:?} embedding {:?}", config.id, e.kind, e.mapping);
        println!("  placed {:?}, detached {:?}", r.placed, r.disconnected);
    }
    println!("selections: {:?}", state.selections());
    println!("disconnections: {}", state.disconnections.len());
}
