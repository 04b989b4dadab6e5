//! The published B12 solution rebuilt as a schedule, with its objective
//! split into terms and its work windows.
//!
//! cargo run --example b12_decomposition

use heliplan::bench::{b12_fixture, render_windows};
use heliplan::config::Config;
use heliplan::feasibility::check_schedule;
use heliplan::objective::evaluate;

fn main() -> heliplan::Result<()> {
    let f = b12_fixture(Config::default().calibration.b12);
    println!("violated rows: {}", check_schedule(&f.instance, &f.schedule)?.len());
    print!("{}", render_windows(&f.instance, &f.schedule));
    print!("{}", evaluate(&f.instance, &f.schedule)?.to_block());
    Ok(())
}
