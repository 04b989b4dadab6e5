//! Validates the bundled instance, checks a greedy schedule and then a
//! broken copy of it.
//!
//! cargo run --example check_schedule

use heliplan::construct::initial_solution;
use heliplan::feasibility::check_schedule;
use heliplan::model::format::load_instance;
use heliplan::model::validate_instance;
use heliplan::Activity;

fn main() -> heliplan::Result<()> {
    let inst = load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json"))?;
    for d in validate_instance(&inst) {
        println!("{d}");
    }

    let sol = initial_solution(&inst, 0)?;
    println!("greedy schedule: {} violated rows", check_schedule(&inst, &sol.schedule)?.len());

    // Leave h1 at its start position for the whole day.
    let mut broken = sol.schedule.clone();
    let start = inst.helicopters[0].start;
    broken.timelines[0] = vec![Activity::At(start); inst.horizon()];
    let report = check_schedule(&inst, &broken)?;
    println!("h1 grounded at its start: {} violated rows", report.len());
    print!("{}", report.to_json_lines());
    Ok(())
}
