use super::decode::decode;
use super::plan::{closest, HeliPlan, Shift, TrajectoryPlan, WorkPlan};
use crate::model::{HeliIdx, Instance};
use crate::Result;

/// Every helicopter works as soon as it may and as long as its budgets
/// allow, rests the minimum, and repeats. Members of a trajectory fall into
/// a staggered rhythm because the decoder holds back a helicopter whose
/// stay would meet another member's.
pub fn assign_work(instance: &Instance, trajectories: TrajectoryPlan) -> Result<WorkPlan> {
    let horizon = instance.horizon();
    let helicopters = instance
        .helicopter_ids()
        .map(|a| {
            let h = instance.heli(a);
            let rounds = horizon / (h.min_rest as usize + 2) + 1;
            HeliPlan {
                shifts: vec![Shift::asap(); rounds],
                park: park_for(instance, a),
                park_departure: 0,
                reposition: false,
            }
        })
        .collect();
    let mut plan = WorkPlan {
        trajectories,
        helicopters,
    };
    prune(instance, &mut plan)?;
    Ok(plan)
}

/// Base closest to the helicopter's start position.
pub fn park_for(instance: &Instance, a: HeliIdx) -> crate::model::NodeIdx {
    let start = instance.heli(a).start;
    closest(instance, start, instance.bases(), a).unwrap_or(instance.bases()[0])
}

/// Drops shifts that produced no circuit, when doing so leaves the
/// schedule unchanged.
pub fn prune(instance: &Instance, plan: &mut WorkPlan) -> Result<()> {
    let before = decode(instance, plan)?;
    let mut pruned = plan.clone();
    for (a, hp) in pruned.helicopters.iter_mut().enumerate() {
        let used: Vec<usize> = before.outcomes[a].iter().map(|o| o.shift).collect();
        hp.shifts = hp
            .shifts
            .iter()
            .enumerate()
            .filter(|(k, _)| used.contains(k))
            .map(|(_, s)| *s)
            .collect();
    }
    if decode(instance, &pruned)?.schedule == before.schedule {
        *plan = pruned;
    }
    Ok(())
}
