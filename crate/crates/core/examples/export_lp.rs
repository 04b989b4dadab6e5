//! Writes the mixed-integer model of the bundled instance in LP format and
//! confirms that a greedy schedule satisfies every row.
//!
//! cargo run --example export_lp -- [out.lp]

use heliplan::construct::initial_solution;
use heliplan::milp::{build_milp, check_assignment, emit_lp, schedule_to_assignment};
use heliplan::model::format::load_instance;

fn main() -> heliplan::Result<()> {
    let inst = load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json"))?;
    let model = build_milp(&inst)?;
    println!("{} variables, {} rows, {} nonzeros", model.variables.len(), model.rows.len(), model.nonzeros());
    for (prefix, n) in model.census() {
        println!("  {prefix:<5} {n}");
    }

    let sol = initial_solution(&inst, 0)?;
    let asg = schedule_to_assignment(&inst, &sol.schedule)?;
    println!("greedy schedule breaks {} rows, objective {:.6}", check_assignment(&model, &asg).len(), model.objective_value(&asg));

    let text = emit_lp(&model);
    match std::env::args().nth(1) {
        Some(path) => std::fs::write(&path, text)?,
        None => println!("{}", text.lines().take(12).collect::<Vec<_>>().join("\n")),
    }
    Ok(())
}
