//! Exact optimum of a few tiny instances next to what both drivers find.
//!
//! cargo run --release --example brute_force

use heliplan::bench::{brute_force_optimum, generate_instance, run_algorithm, Algorithm, FamilySpec};
use heliplan::config::Config;
use heliplan::improve::Budget;

fn main() -> heliplan::Result<()> {
    let config = Config::default();
    println!("inst  helis  |T|   optimum      g+sa         g+ils");
    for seed in 1..=6 {
        let spec = FamilySpec::tiny(seed);
        let inst = generate_instance(&spec);
        let best = brute_force_optimum(&inst)?;
        let run = |algo| run_algorithm(&inst, algo, Budget::Iterations(20_000), &[], seed, &config);
        let (sa, ils) = (run(Algorithm::Sa)?, run(Algorithm::Ils)?);
        println!(
            "{:<5} {:>5} {:>4}  {:>10.6}  {:>10.6}  {:>10.6}",
            spec.name,
            inst.helicopters.len(),
            inst.horizon(),
            best.value.total,
            sa.best.value.total,
            ils.best.value.total
        );
    }
    Ok(())
}
