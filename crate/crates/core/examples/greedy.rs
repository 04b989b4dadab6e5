//! Builds the greedy starting schedule and prints it as a Gantt chart.
//!
//! cargo run --example greedy -- [seed]

use heliplan::bench::render_schedule;
use heliplan::construct::initial_solution;
use heliplan::model::format::load_instance;

fn main() -> heliplan::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let inst = load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json"))?;
    let sol = initial_solution(&inst, seed)?;
    for (w, epochs) in sol.plan.trajectories.nodes.iter().enumerate() {
        for (k, e) in epochs.iter().enumerate() {
            println!("{} epoch {k}: load at {}, drop at {}", inst.trajectories[w], inst.node(e.load).id, inst.node(e.drop).id);
        }
    }
    print!("{}", render_schedule(&inst, &sol.schedule));
    print!("{}", sol.value.to_block());
    Ok(())
}
