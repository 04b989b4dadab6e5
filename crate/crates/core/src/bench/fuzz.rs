use crate::model::{Activity, Instance, NodeIdx, Partition, Schedule};
use crate::rng;
use rand::seq::IndexedRandom;
use rand::Rng as _;

/// A random coherent walk for every helicopter. Most choices follow the
/// rules (stays of `α` at water points and wildfire nodes, rests of at least
/// `mr`, flights of `λ`, loads before drops, ending at a base) and a few
/// break them, so that both feasible and slightly infeasible schedules come
/// out.
pub fn random_schedule(instance: &Instance, seed: u64) -> Schedule {
    let mut r = rng::from_seed(seed);
    let horizon = instance.horizon();
    let mut timelines = Vec::with_capacity(instance.helicopters.len());
    for a in instance.helicopter_ids() {
        let heli = instance.heli(a);
        let obey = r.random_bool(0.85);
        let p_rule = if obey { 0.97 } else { 0.75 };
        let mut line = Vec::with_capacity(horizon);
        let mut here = heli.start;
        let mut loaded = heli.initially_loaded;
        line.push(Activity::At(here));
        let mut stay = r.random_range(0..3usize);
        while line.len() < horizon {
            for _ in 0..stay.min(horizon - line.len()) {
                line.push(Activity::At(here));
            }
            if line.len() >= horizon {
                break;
            }
            let left = horizon - line.len();
            let choices: Vec<NodeIdx> = instance
                .out_edges(here)
                .iter()
                .map(|&e| instance.edge(e).to)
                .collect();
            if choices.is_empty() {
                line.push(Activity::At(here));
                continue;
            }
            let wanted: Vec<NodeIdx> = choices
                .iter()
                .copied()
                .filter(|&j| match instance.partition(j) {
                    Partition::Water => !loaded,
                    Partition::Wildfire => loaded,
                    _ => true,
                })
                .collect();
            let to_base: Vec<NodeIdx> = choices.iter().copied().filter(|&j| instance.is_base(j)).collect();
            let near_end = left <= 4 && !to_base.is_empty();
            let next = if near_end && r.random_bool(p_rule) {
                *to_base.choose(&mut r).unwrap()
            } else if !wanted.is_empty() && r.random_bool(p_rule) {
                *wanted.choose(&mut r).unwrap()
            } else {
                *choices.choose(&mut r).unwrap()
            };
            let e = instance.edge_between(here, next).unwrap();
            let lambda = instance.flight_time(e, a) as usize;
            let len = if r.random_bool(p_rule) { lambda } else { r.random_range(1..=lambda + 1) };
            for _ in 0..len.min(left) {
                line.push(Activity::Fly(e));
            }
            if line.len() >= horizon {
                break;
            }
            here = next;
            line.push(Activity::At(here));
            let alpha = instance.service_time(here, a) as usize;
            stay = match instance.partition(here) {
                Partition::Water | Partition::Wildfire => {
                    loaded = instance.is_water(here);
                    if r.random_bool(p_rule) {
                        alpha - 1
                    } else {
                        r.random_range(0..=alpha + 1)
                    }
                }
                Partition::Base => {
                    let mr = heli.min_rest as usize;
                    if r.random_bool(p_rule) {
                        mr - 1 + r.random_range(0..3)
                    } else {
                        r.random_range(0..=mr)
                    }
                }
                Partition::Start => 0,
            };
        }
        line.truncate(horizon);
        timelines.push(line);
    }
    Schedule::new(timelines)
}
