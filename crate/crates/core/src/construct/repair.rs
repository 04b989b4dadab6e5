use super::decode::{decode, Decoded};
use super::plan::{closest_first, WorkPlan};
use crate::feasibility::{check_schedule, ConstraintRef, Violation, ViolationReport};
use crate::model::{HeliIdx, Instance, NodeIdx, TrajIdx};
use crate::{rng, Error, Result};
use std::collections::HashSet;

/// Repair family applied to a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fix {
    /// Rest at another base.
    Base,
    /// Load at another water point.
    Water,
    /// Leave one interval earlier or later.
    Shift,
}

/// Fixes the first violation in report order until none is left. Base
/// capacity rows send a helicopter to the next-closest base, water rows move
/// the trajectory to the next-closest water point, and rows tied to one
/// helicopter move the departure of the shift that covers the interval.
pub fn repair(instance: &Instance, plan: &mut WorkPlan, attempts: usize, seed: u64) -> Result<(Decoded, usize)> {
    let mut r = rng::from_seed(rng::sub_seed(seed, 3));
    let mut tried: HashSet<(Fix, usize, usize, usize)> = HashSet::new();
    let mut last = ViolationReport::default();
    for attempt in 0..=attempts {
        let decoded = decode(instance, plan)?;
        let report = check_schedule(instance, &decoded.schedule)?;
        if report.is_empty() {
            return Ok((decoded, attempt));
        }
        if attempt == attempts {
            last = report;
            break;
        }
        let v = report.iter().next().expect("non-empty report").clone();
        let applied = match v.row.constraint {
            ConstraintRef::Model(1) => fix_base(instance, plan, &decoded, &v, &mut tried),
            ConstraintRef::Model(2..=4) => fix_water(instance, plan, &decoded, &v, &mut tried, &mut r),
            _ => fix_shift(instance, plan, &decoded, &v, &mut tried),
        };
        if !applied {
            last = report;
            return Err(Error::RepairExhausted {
                attempts: attempt,
                residual: last,
            });
        }
    }
    Err(Error::RepairExhausted {
        attempts,
        residual: last,
    })
}

fn interval(v: &Violation) -> usize {
    v.row.index.t.map_or(0, |t| t.saturating_sub(1))
}

fn fix_base(
    instance: &Instance,
    plan: &mut WorkPlan,
    decoded: &Decoded,
    v: &Violation,
    tried: &mut HashSet<(Fix, usize, usize, usize)>,
) -> bool {
    let Some(i) = v.row.index.i.map(NodeIdx) else { return false };
    let t = interval(v);
    for a in instance.helicopter_ids() {
        if decoded.schedule.at(a, t) != Some(i) {
            continue;
        }
        let outcome = decoded.outcomes[a.0].iter().rev().find(|o| o.arrival <= t && o.base == i);
        let ranked: Vec<NodeIdx> = instance
            .bases()
            .iter()
            .copied()
            .filter(|&b| b != i)
            .collect();
        match outcome {
            Some(o) => {
                for b in ranked {
                    if tried.insert((Fix::Base, a.0, o.shift, b.0)) {
                        plan.helicopters[a.0].shifts[o.shift].base = Some(b);
                        return true;
                    }
                }
            }
            None => {
                for b in ranked {
                    if tried.insert((Fix::Base, a.0, usize::MAX, b.0)) {
                        plan.helicopters[a.0].park = b;
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn fix_water(
    instance: &Instance,
    plan: &mut WorkPlan,
    decoded: &Decoded,
    v: &Violation,
    tried: &mut HashSet<(Fix, usize, usize, usize)>,
    r: &mut rng::Rng,
) -> bool {
    let Some(i) = v.row.index.i.map(NodeIdx) else { return false };
    let t = interval(v);
    let tp = &mut plan.trajectories;
    for a in instance.helicopter_ids() {
        if decoded.schedule.at(a, t) != Some(i) {
            continue;
        }
        let w = instance.heli(a).trajectory;
        let k = tp.epoch_of(t);
        let drop = tp.nodes[w.0][k].drop;
        for c in closest_first(instance, drop, instance.waters(), a, r) {
            if c != i && tried.insert((Fix::Water, w.0, k, c.0)) {
                tp.nodes[w.0][k].load = c;
                return true;
            }
        }
    }
    false
}

fn fix_shift(
    instance: &Instance,
    plan: &mut WorkPlan,
    decoded: &Decoded,
    v: &Violation,
    tried: &mut HashSet<(Fix, usize, usize, usize)>,
) -> bool {
    let t = interval(v);
    let candidates: Vec<HeliIdx> = match (v.row.index.a, v.row.index.w) {
        (Some(a), _) => vec![HeliIdx(a)],
        (None, Some(w)) => instance.members(TrajIdx(w)).to_vec(),
        (None, None) => instance.helicopter_ids().collect(),
    };
    for a in candidates {
        let hp = &mut plan.helicopters[a.0];
        // The shift running at t, or the first one after it.
        let covering = decoded.outcomes[a.0]
            .iter()
            .find(|o| o.arrival >= t)
            .or_else(|| decoded.outcomes[a.0].last());
        match covering {
            Some(o) => {
                for (step, delta) in [(0usize, 1i64), (1, -1), (2, 2), (3, -2)] {
                    let to = o.departure as i64 + delta;
                    if to < 0 || !tried.insert((Fix::Shift, a.0, o.shift, step)) {
                        continue;
                    }
                    hp.shifts[o.shift].start = to as usize;
                    return true;
                }
            }
            None => {
                for (step, delta) in [(0usize, 1i64), (1, -1)] {
                    let to = hp.park_departure as i64 + delta;
                    if to < 0 || !tried.insert((Fix::Shift, a.0, usize::MAX, step)) {
                        continue;
                    }
                    hp.park_departure = to as usize;
                    return true;
                }
            }
        }
    }
    false
}
