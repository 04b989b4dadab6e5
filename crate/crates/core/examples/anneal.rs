//! Simulated annealing from the greedy start on a generated small instance,
//! with the best value at a few checkpoints.
//!
//! cargo run --release --example anneal -- [spec] [iterations]

use heliplan::bench::{generate_instance, FamilySpec};
use heliplan::config::Config;
use heliplan::improve::{simulated_annealing, Budget, SaParams};

fn main() -> heliplan::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec = args.next().unwrap_or_else(|| "S3".into());
    let iterations: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(8_000);
    let inst = generate_instance(&FamilySpec::by_name(&spec).expect("known table row"));

    let mut params = SaParams::from_config(&Config::default(), Budget::Iterations(iterations), 1);
    params.checkpoints = (1..=4).map(|k| (iterations * k / 4) as f64).collect();
    let out = simulated_annealing(&inst, &params)?;
    let t = &out.trace;
    println!("{spec}: initial {:.5}", t.initial);
    for c in &t.checkpoints {
        println!("  after {:>6} candidates: best {:.5} ({} restarts)", c.iterations, c.best, c.restarts);
    }
    println!("stopped: {:?}, accepted {:?}", t.stop, t.accepted);
    print!("{}", out.best.value.to_block());
    Ok(())
}
