//! Raises one wildfire node's efficiency for part of the day and replans,
//! showing the cell diff and how the drops move.
//!
//! cargo run --example efficiency_patch

use heliplan::construct::initial_solution;
use heliplan::model::format::load_instance;
use heliplan::service::{diff_instances, patch_efficiency, EfficiencyPatch};

fn main() -> heliplan::Result<()> {
    let inst = load_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json"))?;
    let patch = EfficiencyPatch {
        node: "I1".into(),
        from: 1,
        to: 12,
        value: 10.0,
    };
    let patched = patch_efficiency(&inst, &patch)?;
    let diff = diff_instances(&inst, &patched);
    println!("{} cells changed, new evolutions at {:?}", diff.efficiency.len(), diff.evolution);

    for (name, i) in [("before", &inst), ("after", &patched)] {
        let sol = initial_solution(i, 0)?;
        println!("{name}: objective {:.5}", sol.value.total);
        for (k, e) in sol.plan.trajectories.nodes[0].iter().enumerate() {
            println!("  epoch {k}: load at {}, drop at {}", i.node(e.load).id, i.node(e.drop).id);
        }
    }
    Ok(())
}
