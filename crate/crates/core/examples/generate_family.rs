//! Generates one row of each instance family and prints its shape.
//!
//! cargo run --example generate_family

use heliplan::bench::{generate_instance, FamilySpec};
use heliplan::model::validate_instance;

fn main() {
    for name in ["S1", "M5", "B3", "T7"] {
        let spec = FamilySpec::by_name(name).expect("known table row");
        let inst = generate_instance(&spec);
        let errors = validate_instance(&inst).iter().filter(|d| d.is_error()).count();
        println!(
            "{name}: {} helicopters, {} trajectories, |T| = {}, {} water / {} fire / {} base nodes, {} evolutions, {errors} errors",
            inst.helicopters.len(),
            inst.trajectories.len(),
            inst.horizon(),
            inst.waters().len(),
            inst.fires().len(),
            inst.bases().len(),
            inst.evolution.iter().filter(|&&e| e).count(),
        );
    }
}
