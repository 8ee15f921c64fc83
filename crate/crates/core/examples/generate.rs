//! Random scenarios: mixed configurations, equal-size configurations, and
//! singletons only.

use msr_plan::bench::{generate_scenario, GenParams};

fn describe(label: &str, p: &GenParams) -> Result<(), Box<dyn std::error::Error>> {
    let s = generate_scenario(p)?;
    let mut sizes: Vec<usize> = s.configurations.iter().map(|c| c.len()).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!(
        "{label}: {} spots, {} modules, {} singletons, configuration sizes {sizes:?}",
        s.target.len(),
        s.modules.len(),
        s.singletons().count()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    describe("mixed", &GenParams::new(50, 1))?;
    describe("equal size 20", &GenParams::new(100, 1).equal_configs(20))?;
    describe("singletons", &GenParams::new(25, 1).singletons_only())?;
    let mut glued = GenParams::new(40, 1);
    glued.target_from_configs = true;
    describe("target glued from configurations", &glued)?;
    let mut more = GenParams::new(20, 1);
    more.n_modules = Some(30);
    describe("surplus modules", &more)?;
    Ok(())
}
