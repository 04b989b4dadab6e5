//! Small benchmark: both drivers on two table rows with a few seeds each,
//! reported as mean, standard deviation and RDP per checkpoint.
//!
//! cargo run --release --example compare

use heliplan::bench::{run_comparison, Algorithm, ComparisonRequest, FamilySpec};
use heliplan::config::Config;
use heliplan::improve::Budget;

fn main() -> heliplan::Result<()> {
    let request = ComparisonRequest {
        repetitions: 3,
        budget: Budget::Iterations(3_000),
        checkpoints: vec![500.0, 1_500.0],
        first_seed: 1,
    };
    let specs = [FamilySpec::small(2), FamilySpec::small(7)];
    let report = run_comparison(&specs, &[Algorithm::Sa, Algorithm::Ils], &request, &Config::default())?;
    print!("{}", report.to_table());
    Ok(())
}
