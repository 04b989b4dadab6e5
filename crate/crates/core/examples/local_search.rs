//! Iterated local search on a medium instance, comparing the greedy start
//! with the result drop for drop.
//!
//! cargo run --release --example local_search -- [spec] [iterations]

use heliplan::bench::{generate_instance, summarize, FamilySpec};
use heliplan::config::Config;
use heliplan::construct::initial_solution;
use heliplan::improve::{iterated_local_search, Budget, IlsParams};

fn main() -> heliplan::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = args.next().unwrap_or_else(|| "M1".into());
    let iterations: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let inst = generate_instance(&FamilySpec::by_name(&spec).expect("known table row"));

    let start = initial_solution(&inst, 2)?;
    let params = IlsParams::from_config(&Config::default(), Budget::Iterations(iterations), 2);
    let out = iterated_local_search(&inst, &params)?;
    let (a, b) = (summarize(&inst, &start.schedule)?, summarize(&inst, &out.best.schedule)?);
    println!("{spec} with {} helicopters over {} intervals", inst.helicopters.len(), inst.horizon());
    println!("            objective  drops  flights  changes  blanks");
    for (name, v, s) in [("greedy", start.value.total, a), ("g+ils", out.best.value.total, b)] {
        println!("{name:<10} {v:>10.5} {:>6} {:>8} {:>8} {:>7}", s.drops, s.flights, s.trajectory_changes, s.blank_times);
    }
    Ok(())
}
