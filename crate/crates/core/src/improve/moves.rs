use crate::config::MoveSettings;
use crate::construct::{closest, repair, Shift, Solution, WorkPlan};
use crate::model::{HeliIdx, Instance, NodeIdx, TrajIdx};
use crate::{rng, Error, Result};
use rand::seq::IndexedRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    MI1,
    MI2,
    MI3,
    MI4,
    MI5,
    MI6,
    MI7,
    MI8,
}

impl MoveKind {
    pub const ALL: [MoveKind; 8] = [
        MoveKind::MI1,
        MoveKind::MI2,
        MoveKind::MI3,
        MoveKind::MI4,
        MoveKind::MI5,
        MoveKind::MI6,
        MoveKind::MI7,
        MoveKind::MI8,
    ];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One neighbourhood move on a work plan. Epochs `k` and shift indices are
/// 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "id")]
pub enum Move {
    /// New water point or wildfire node for a trajectory and epoch.
    MI1 { w: TrajIdx, k: usize, node: NodeIdx },
    /// New wildfire node, with the water point closest to it.
    MI2 {
        w: TrajIdx,
        k: usize,
        drop: NodeIdx,
        load: NodeIdx,
    },
    /// An idle helicopter starts working, from its start position or after
    /// a rest at its park base.
    MI3 {
        a: HeliIdx,
        start: usize,
        #[serde(default)]
        reposition: bool,
    },
    /// A helicopter stops working altogether.
    MI4 { a: HeliIdx },
    /// A helicopter resting longer than required goes back to work as soon
    /// as it may; `shift` is the shift to bring forward, or the length of
    /// the list to add one.
    MI5 { a: HeliIdx, shift: usize },
    /// New departure for a shift, or for the transfer of an idle helicopter.
    MI6 {
        a: HeliIdx,
        shift: Option<usize>,
        start: usize,
    },
    /// Return to rest after `stops` loads and drops; `None` lifts the limit.
    MI7 {
        a: HeliIdx,
        shift: usize,
        stops: Option<u32>,
    },
    /// Longer rest before a shift.
    MI8 { a: HeliIdx, shift: usize, start: usize },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::MI1 { .. } => MoveKind::MI1,
            Move::MI2 { .. } => MoveKind::MI2,
            Move::MI3 { .. } => MoveKind::MI3,
            Move::MI4 { .. } => MoveKind::MI4,
            Move::MI5 { .. } => MoveKind::MI5,
            Move::MI6 { .. } => MoveKind::MI6,
            Move::MI7 { .. } => MoveKind::MI7,
            Move::MI8 { .. } => MoveKind::MI8,
        }
    }
}

fn working(sol: &Solution, a: usize) -> bool {
    sol.outcomes[a].iter().any(|o| o.stops > 0)
}

/// Rests longer than the minimum: `(helicopter, shift to advance)`.
fn long_rests(instance: &Instance, sol: &Solution) -> Vec<(HeliIdx, usize)> {
    let horizon = instance.horizon();
    let mut out = Vec::new();
    for a in instance.helicopter_ids() {
        let mr = instance.heli(a).min_rest as usize;
        let outs = &sol.outcomes[a.0];
        for (n, o) in outs.iter().enumerate() {
            if o.stops == 0 {
                continue;
            }
            let next = outs.get(n + 1).map_or(horizon, |p| p.departure);
            if next > o.arrival + mr {
                out.push((a, o.shift + 1));
            }
        }
    }
    out
}

/// Trajectories with a member that has a planned shift.
fn crewed(instance: &Instance, sol: &Solution) -> Vec<TrajIdx> {
    let mut v: Vec<TrajIdx> = instance
        .helicopter_ids()
        .filter(|a| !sol.plan.helicopters[a.0].shifts.is_empty())
        .map(|a| instance.heli(a).trajectory)
        .collect();
    v.sort();
    v.dedup();
    v
}

/// Planned shifts with the stops each one flew: `(helicopter, shift, stops)`.
fn planned(sol: &Solution) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    for (a, hp) in sol.plan.helicopters.iter().enumerate() {
        for s in 0..hp.shifts.len() {
            let stops = sol.outcomes[a].iter().find(|o| o.shift == s).map_or(0, |o| o.stops);
            out.push((a, s, stops));
        }
    }
    out
}

/// Shifts that follow a rest: `(helicopter, shift, departure)`.
fn after_rest(sol: &Solution) -> Vec<(HeliIdx, usize, usize)> {
    let mut out = Vec::new();
    for (a, outs) in sol.outcomes.iter().enumerate() {
        for o in outs.iter().skip(1) {
            out.push((HeliIdx(a), o.shift, o.departure));
        }
    }
    out
}

/// Move kinds that have at least one valid target in `sol`.
pub fn applicable(instance: &Instance, sol: &Solution) -> Vec<MoveKind> {
    let n = instance.helicopters.len();
    let any_working = (0..n).any(|a| working(sol, a));
    let any_idle = (0..n).any(|a| !working(sol, a));
    let mut kinds = Vec::new();
    // Node moves also apply to trajectories whose planned shifts flew
    // nothing yet, so that such a helicopter can be given a reachable water
    // point.
    if !crewed(instance, sol).is_empty() {
        if instance.waters().len() > 1 || instance.fires().len() > 1 {
            kinds.push(MoveKind::MI1);
        }
        if instance.fires().len() > 1 {
            kinds.push(MoveKind::MI2);
        }
    }
    if any_idle {
        kinds.push(MoveKind::MI3);
    }
    if any_working {
        kinds.push(MoveKind::MI4);
        if !long_rests(instance, sol).is_empty() {
            kinds.push(MoveKind::MI5);
        }
        kinds.push(MoveKind::MI6);
    }
    if !planned(sol).is_empty() {
        kinds.push(MoveKind::MI7);
    }
    if any_working {
        if !after_rest(sol).is_empty() {
            kinds.push(MoveKind::MI8);
        }
    }
    kinds
}

/// Draws a move kind uniformly among the applicable ones, then its target.
pub fn random_move(instance: &Instance, sol: &Solution, settings: &MoveSettings, r: &mut rng::Rng) -> Result<Move> {
    let kinds = applicable(instance, sol);
    let kind = *kinds.choose(r).ok_or(Error::NoApplicableMove)?;
    let horizon = instance.horizon();
    let tp = &sol.plan.trajectories;
    let helis: Vec<usize> = (0..instance.helicopters.len()).collect();
    let busy: Vec<usize> = helis.iter().copied().filter(|&a| working(sol, a)).collect();
    let idle: Vec<usize> = helis.iter().copied().filter(|&a| !working(sol, a)).collect();
    let crewed = crewed(instance, sol);
    let mv = match kind {
        MoveKind::MI1 => {
            let w = *crewed.choose(r).expect("applicable");
            let k = r.random_range(0..tp.epochs());
            let cur = tp.nodes[w.0][k];
            let mut options: Vec<NodeIdx> = Vec::new();
            options.extend(instance.waters().iter().copied().filter(|&c| c != cur.load));
            options.extend(instance.fires().iter().copied().filter(|&i| i != cur.drop));
            let node = *options.choose(r).expect("applicable");
            Move::MI1 { w, k, node }
        }
        MoveKind::MI2 => {
            let w = *crewed.choose(r).expect("applicable");
            let k = r.random_range(0..tp.epochs());
            let cur = tp.nodes[w.0][k];
            let fires: Vec<NodeIdx> = instance.fires().iter().copied().filter(|&i| i != cur.drop).collect();
            let drop = *fires.choose(r).expect("applicable");
            let probe = instance.members(w)[0];
            let load = closest(instance, drop, instance.waters(), probe).expect("instance has water points");
            Move::MI2 { w, k, drop, load }
        }
        MoveKind::MI3 => Move::MI3 {
            a: HeliIdx(*idle.choose(r).expect("applicable")),
            start: r.random_range(0..horizon),
            reposition: r.random_bool(0.5),
        },
        MoveKind::MI4 => Move::MI4 {
            a: HeliIdx(*busy.choose(r).expect("applicable")),
        },
        MoveKind::MI5 => {
            let (a, shift) = *long_rests(instance, sol).choose(r).expect("applicable");
            Move::MI5 { a, shift }
        }
        MoveKind::MI6 => {
            let a = *helis.choose(r).expect("fleet is not empty");
            let shift = sol.outcomes[a].choose(r).map(|o| o.shift);
            Move::MI6 {
                a: HeliIdx(a),
                shift,
                start: r.random_range(0..horizon),
            }
        }
        MoveKind::MI7 => {
            // One stop past what was flown lets a shift end on an extra load.
            let (a, shift, flown) = *planned(sol).choose(r).expect("applicable");
            let stops = (1..=flown + 1).find(|_| r.random_bool(settings.return_to_rest_probability));
            Move::MI7 {
                a: HeliIdx(a),
                shift,
                stops,
            }
        }
        MoveKind::MI8 => {
            let (a, shift, departure) = *after_rest(sol).choose(r).expect("applicable");
            let start = if departure + 1 < horizon {
                r.random_range(departure + 1..horizon)
            } else {
                horizon
            };
            Move::MI8 { a, shift, start }
        }
    };
    Ok(mv)
}

/// The plan after `mv`. Node moves apply to every member of the trajectory
/// since the plan stores nodes per trajectory.
pub fn apply_move(plan: &WorkPlan, mv: &Move, instance: &Instance) -> WorkPlan {
    let mut p = plan.clone();
    match *mv {
        Move::MI1 { w, k, node } => {
            let slot = &mut p.trajectories.nodes[w.0][k];
            if instance.is_water(node) {
                slot.load = node;
            } else {
                slot.drop = node;
            }
        }
        Move::MI2 { w, k, drop, load } => {
            p.trajectories.nodes[w.0][k] = crate::construct::EpochNodes { load, drop };
        }
        Move::MI3 { a, start, reposition } => {
            let h = &mut p.helicopters[a.0];
            h.shifts = vec![Shift {
                start,
                stops: None,
                base: None,
            }];
            h.reposition = reposition;
            if reposition {
                h.park_departure = start;
            }
        }
        Move::MI4 { a } => p.helicopters[a.0].shifts.clear(),
        Move::MI5 { a, shift } => {
            let shifts = &mut p.helicopters[a.0].shifts;
            if shift < shifts.len() {
                shifts[shift].start = 0;
            } else {
                shifts.push(Shift::asap());
            }
        }
        Move::MI6 { a, shift, start } => match shift {
            Some(s) if s < p.helicopters[a.0].shifts.len() => p.helicopters[a.0].shifts[s].start = start,
            _ => p.helicopters[a.0].park_departure = start,
        },
        Move::MI7 { a, shift, stops } => {
            if let Some(s) = p.helicopters[a.0].shifts.get_mut(shift) {
                s.stops = stops;
            }
        }
        Move::MI8 { a, shift, start } => {
            if let Some(s) = p.helicopters[a.0].shifts.get_mut(shift) {
                s.start = start;
            }
        }
    }
    p
}

/// Applies a move and restores feasibility with the repair loop. `None`
/// means the move is discarded.
pub fn neighbour(instance: &Instance, sol: &Solution, mv: &Move, settings: &MoveSettings, seed: u64) -> Result<Option<Solution>> {
    let mut plan = apply_move(&sol.plan, mv, instance);
    match repair(instance, &mut plan, settings.repair_attempts, seed) {
        Ok((decoded, repairs)) => Solution::from_decoded(instance, plan, decoded, repairs).map(Some),
        Err(Error::RepairExhausted { .. } | Error::Construction(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
