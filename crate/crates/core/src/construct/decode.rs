use super::plan::{closest, Shift, TrajectoryPlan, WorkPlan};
use crate::model::{Activity, HeliIdx, Instance, NodeIdx, NodeKind, Schedule};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// What a shift of the plan turned into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftOutcome {
    /// Index into the helicopter's shift list.
    pub shift: usize,
    /// First flying interval.
    pub departure: usize,
    /// First interval back at the rest base.
    pub arrival: usize,
    /// Loads plus drops.
    pub stops: u32,
    pub drops: u32,
    pub base: NodeIdx,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub schedule: Schedule,
    pub outcomes: Vec<Vec<ShiftOutcome>>,
}

impl Decoded {
    /// Helicopters that serve at least one node.
    pub fn is_working(&self, a: HeliIdx) -> bool {
        self.outcomes[a.0].iter().any(|o| o.stops > 0)
    }
}

/// Turns a work plan into a schedule.
///
/// Helicopters are simulated together in time order. The next stop (a load
/// when empty, a drop when loaded) is flown only when the helicopter can
/// still reach a base with room afterwards within its flight budgets and the
/// horizon, and when the stay neither collides with another member of the
/// trajectory nor overfills a water point. A helicopter waiting at a base or
/// its start retries one interval later; one that is already out goes back
/// to rest, loaded or not.
pub fn decode(instance: &Instance, plan: &WorkPlan) -> Result<Decoded> {
    let n = instance.helicopters.len();
    if plan.helicopters.len() != n {
        return Err(Error::Construction(format!(
            "plan has {} helicopters, instance has {n}",
            plan.helicopters.len()
        )));
    }
    if plan.trajectories.nodes.len() != instance.trajectories.len() {
        return Err(Error::Construction("plan and instance disagree on trajectories".into()));
    }
    let horizon = instance.horizon();
    let mut d = Decoder {
        inst: instance,
        plan,
        sims: instance.helicopter_ids().map(|a| Sim::new(instance, a)).collect(),
        trajs: vec![TrajState::default(); instance.trajectories.len()],
        occ: Occupancy::new(instance),
    };
    let mut queue: BinaryHeap<Reverse<(usize, usize)>> = BinaryHeap::new();
    for a in 0..n {
        queue.push(Reverse((d.next_decision(a), a)));
    }
    while let Some(Reverse((t, a))) = queue.pop() {
        if let Some(next) = d.decide(a, t)? {
            queue.push(Reverse((next, a)));
        }
    }
    let mut timelines = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);
    for sim in d.sims {
        debug_assert_eq!(sim.line.len(), horizon);
        timelines.push(sim.line);
        outcomes.push(sim.outcomes);
    }
    Ok(Decoded {
        schedule: Schedule::new(timelines),
        outcomes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    /// At the start position or a base, waiting for the next shift.
    Waiting,
    /// On the way to a water point or wildfire node.
    Serving,
    Done,
}

#[derive(Debug, Clone)]
struct Sim {
    a: HeliIdx,
    line: Vec<Activity>,
    loc: NodeIdx,
    phase: Phase,
    loaded: bool,
    counter: i64,
    total: i64,
    shift: usize,
    open: Option<ShiftOutcome>,
    /// Base held for the end of the current stop, with the arrival.
    reserved: Option<(NodeIdx, usize)>,
    /// Set after a transfer from the start position, so that a failing
    /// shift is not retried forever.
    moved_off_start: bool,
    repositioned: bool,
    /// Stops in the leg being flown.
    leg_stops: u32,
    outcomes: Vec<ShiftOutcome>,
}

impl Sim {
    fn new(inst: &Instance, a: HeliIdx) -> Self {
        let h = inst.heli(a);
        Self {
            a,
            line: vec![Activity::At(h.start)],
            loc: h.start,
            phase: Phase::Waiting,
            loaded: h.initially_loaded,
            counter: i64::from(h.consecutive_flight),
            total: i64::from(h.total_flight),
            shift: 0,
            open: None,
            reserved: None,
            moved_off_start: false,
            repositioned: false,
            leg_stops: 0,
            outcomes: Vec::new(),
        }
    }

    fn stay_until(&mut self, t: usize) {
        while self.line.len() < t {
            self.line.push(Activity::At(self.loc));
        }
    }

    /// Flies from the current node at `d`; returns the arrival interval.
    fn fly(&mut self, inst: &Instance, to: NodeIdx, d: usize) -> usize {
        self.stay_until(d);
        let e = inst.edge_between(self.loc, to).expect("caller checked the edge");
        if inst.is_base(self.loc) {
            self.counter = 0;
        }
        let lambda = inst.flight_time(e, self.a) as usize;
        for _ in 0..lambda {
            self.line.push(Activity::Fly(e));
        }
        self.counter += lambda as i64;
        self.total += lambda as i64;
        self.loc = to;
        self.line.len()
    }

    fn hover(&mut self, inst: &Instance) {
        let alpha = inst.service_time(self.loc, self.a) as usize;
        for _ in 0..alpha {
            self.line.push(Activity::At(self.loc));
        }
        self.counter += alpha as i64;
        self.total += alpha as i64;
        self.loaded = inst.is_water(self.loc);
    }
}

/// Helicopters present per node and interval.
#[derive(Debug, Clone)]
struct Occupancy {
    horizon: usize,
    /// `[trajectory][node * horizon + t]`
    members: Vec<Vec<u16>>,
    /// `[node * horizon + t]`, all helicopters.
    all: Vec<u16>,
}

impl Occupancy {
    fn new(inst: &Instance) -> Self {
        let cells = inst.nodes.len() * inst.horizon();
        Self {
            horizon: inst.horizon(),
            members: vec![vec![0; cells]; inst.trajectories.len()],
            all: vec![0; cells],
        }
    }

    fn add(&mut self, w: usize, i: NodeIdx, from: usize, to: usize, delta: i32) {
        let h = self.horizon;
        for t in from..to.min(h) {
            let c = i.0 * h + t;
            self.members[w][c] = (i32::from(self.members[w][c]) + delta) as u16;
            self.all[c] = (i32::from(self.all[c]) + delta) as u16;
        }
    }

    /// Whether a stay of a member of `w` at service node `i` fits.
    fn stay_fits(&self, inst: &Instance, w: usize, i: NodeIdx, from: usize, to: usize) -> bool {
        let h = self.horizon;
        let limit = match inst.node(i).kind {
            NodeKind::WaterPoint { simultaneous, .. } => simultaneous as usize,
            _ => usize::MAX,
        };
        (from..to.min(h)).all(|t| {
            let c = i.0 * h + t;
            self.members[w][c] == 0 && (self.all[c] as usize) < limit
        })
    }

    /// Whether one more helicopter fits at base `b` from `from` to the end.
    fn base_fits(&self, inst: &Instance, b: NodeIdx, from: usize) -> bool {
        let NodeKind::RestBase { capacity } = inst.node(b).kind else {
            return false;
        };
        let h = self.horizon;
        (from..h).all(|t| (self.all[b.0 * h + t] as usize) < capacity as usize)
    }
}

/// One or two stops flown in one go: a load is booked together with the
/// drop that follows it.
#[derive(Debug, Clone, Copy)]
struct Leg {
    first: Stop,
    then: Option<Stop>,
}

impl Leg {
    fn last(&self) -> &Stop {
        self.then.as_ref().unwrap_or(&self.first)
    }
}

/// A stop ready to be flown, with the base to rest at afterwards.
#[derive(Debug, Clone, Copy)]
struct Stop {
    node: NodeIdx,
    /// 0 for a load, 1 for a drop.
    p: usize,
    choice: Choice,
    arrival: usize,
    base: NodeIdx,
    back_at: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reject {
    /// Another helicopter is in the way; later may work.
    Blocked,
    /// Budgets, horizon or graph rule the stop out.
    Unfit,
}

/// Which epoch's node a visit uses, for the trajectory bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Choice {
    First(usize),
    Current,
    Switch(usize),
    Pending,
}

/// Tracks when a trajectory moves from one epoch's nodes to the next. A
/// switch happens at a cut: every visit to a node being replaced ends
/// before the cut and every visit to its replacement starts at or after it,
/// so the trajectory changes nodes once per evolution.
#[derive(Debug, Clone, Default)]
struct TrajState {
    used: bool,
    cur: usize,
    until: [Option<usize>; 2],
    pending: Option<Pending>,
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    to: usize,
    cut: usize,
    until: [Option<usize>; 2],
}

fn max_opt(a: Option<usize>, b: usize) -> Option<usize> {
    Some(a.map_or(b, |x| x.max(b)))
}

fn node_in(tp: &TrajectoryPlan, w: usize, k: usize, p: usize) -> NodeIdx {
    let e = tp.nodes[w][k];
    if p == 0 {
        e.load
    } else {
        e.drop
    }
}

impl TrajState {
    fn settle(&mut self, d: usize) {
        if let Some(p) = self.pending {
            if d >= p.cut {
                self.cur = p.to;
                self.until = p.until;
                self.pending = None;
            }
        }
    }

    /// Node for a visit in partition `p` (0 water, 1 wildfire), given the
    /// arrival time each candidate would have.
    fn pick(
        &self,
        tp: &TrajectoryPlan,
        w: usize,
        p: usize,
        arrival: &dyn Fn(NodeIdx) -> Option<usize>,
        stay: &dyn Fn(NodeIdx) -> usize,
    ) -> Option<(NodeIdx, usize, Choice)> {
        let node = |k: usize| node_in(tp, w, k, p);
        if !self.used {
            let mut k = 0;
            for _ in 0..2 {
                let e = tp.epoch_of(arrival(node(k))?);
                if e == k {
                    break;
                }
                k = e;
            }
            return arrival(node(k)).map(|s| (node(k), s, Choice::First(k)));
        }
        if let Some(pd) = self.pending {
            let new = node(pd.to);
            let old = node(self.cur);
            if new == old {
                return arrival(new).map(|s| (new, s, Choice::Pending));
            }
            if let Some(s) = arrival(new).filter(|&s| s >= pd.cut) {
                return Some((new, s, Choice::Pending));
            }
            if let Some(s) = arrival(old).filter(|&s| s + stay(old) <= pd.cut) {
                return Some((old, s, Choice::Current));
            }
            return None;
        }
        let cur_nodes = tp.nodes[w][self.cur];
        for k in (self.cur + 1..tp.epochs()).rev() {
            let cand = node(k);
            let Some(s) = arrival(cand) else { continue };
            if tp.epoch_of(s) != k {
                continue;
            }
            if tp.nodes[w][k] == cur_nodes || cand == node(self.cur) {
                break;
            }
            let other_changes = node_in(tp, w, k, 1 - p) != node_in(tp, w, self.cur, 1 - p);
            let clear = |q: usize| self.until[q].is_none_or(|u| u < s);
            if clear(p) && (!other_changes || clear(1 - p)) {
                return Some((cand, s, Choice::Switch(k)));
            }
            break;
        }
        let old = node(self.cur);
        arrival(old).map(|s| (old, s, Choice::Current))
    }

    fn register(&mut self, tp: &TrajectoryPlan, w: usize, p: usize, choice: Choice, arrival: usize, end: usize) {
        match choice {
            Choice::First(k) => {
                self.used = true;
                self.cur = k;
                self.until[p] = max_opt(self.until[p], end);
            }
            Choice::Current => self.until[p] = max_opt(self.until[p], end),
            Choice::Switch(k) => {
                let mut until = [None, None];
                // Nodes shared by both epochs carry their history over.
                for (q, slot) in until.iter_mut().enumerate() {
                    if node_in(tp, w, self.cur, q) == node_in(tp, w, k, q) {
                        *slot = self.until[q];
                    }
                }
                until[p] = max_opt(until[p], end);
                self.pending = Some(Pending {
                    to: k,
                    cut: arrival,
                    until,
                });
            }
            Choice::Pending => {
                if let Some(pd) = &mut self.pending {
                    pd.until[p] = max_opt(pd.until[p], end);
                    if node_in(tp, w, self.cur, p) == node_in(tp, w, pd.to, p) {
                        self.until[p] = max_opt(self.until[p], end);
                    }
                }
            }
        }
    }
}

struct Decoder<'a> {
    inst: &'a Instance,
    plan: &'a WorkPlan,
    sims: Vec<Sim>,
    trajs: Vec<TrajState>,
    occ: Occupancy,
}

impl Decoder<'_> {
    fn shifts(&self, a: usize) -> &[Shift] {
        &self.plan.helicopters[a].shifts
    }

    fn traj(&self, a: usize) -> usize {
        self.inst.helicopters[a].trajectory.0
    }

    /// Earliest interval at which helicopter `a` may leave where it is.
    fn earliest(&self, a: usize) -> usize {
        let sim = &self.sims[a];
        let h = &self.inst.helicopters[a];
        if sim.loc == h.start {
            let pending_rest = if h.consecutive_rest > 0 && h.consecutive_rest < h.min_rest {
                (h.min_rest - h.consecutive_rest) as usize
            } else {
                0
            };
            pending_rest.max(1).max(sim.line.len())
        } else {
            sim.line.len() + h.min_rest as usize
        }
    }

    fn next_decision(&self, a: usize) -> usize {
        let sim = &self.sims[a];
        match sim.phase {
            Phase::Waiting => match self.shifts(a).get(sim.shift) {
                Some(s) => s.start.max(self.earliest(a)),
                None => sim.line.len(),
            },
            Phase::Serving | Phase::Done => sim.line.len(),
        }
    }

    fn decide(&mut self, a: usize, t: usize) -> Result<Option<usize>> {
        match self.sims[a].phase {
            Phase::Done => Ok(None),
            Phase::Waiting => self.decide_waiting(a, t),
            Phase::Serving => {
                let dropped = self.sims[a].loaded;
                let leg = self.sims[a].leg_stops;
                self.sims[a].hover(self.inst);
                let t = self.sims[a].line.len();
                let shift = self.shifts(a)[self.sims[a].shift];
                let done = {
                    let o = self.sims[a].open.as_mut().expect("a shift is open while serving");
                    o.stops += leg;
                    o.drops += u32::from(dropped);
                    o.stops
                };
                if shift.stops.is_none_or(|c| done < c) {
                    if let Ok(c) = self.try_stop(a, t, &shift, done) {
                        self.commit(a, t, c);
                        return Ok(Some(self.sims[a].line.len()));
                    }
                }
                self.return_to_base(a, t);
                Ok(Some(self.next_decision(a)))
            }
        }
    }

    fn decide_waiting(&mut self, a: usize, t: usize) -> Result<Option<usize>> {
        let start = self.inst.helicopters[a].start;
        loop {
            let Some(shift) = self.shifts(a).get(self.sims[a].shift).copied() else {
                self.finish(a)?;
                return Ok(None);
            };
            if self.sims[a].loc == start && self.plan.helicopters[a].reposition && !self.sims[a].repositioned {
                let dep = self.plan.helicopters[a].park_departure.max(self.earliest(a));
                if dep > t {
                    return Ok(Some(dep));
                }
                self.sims[a].repositioned = true;
                if let Some((b, back_at)) = self.free_base(a, start, t, Some(self.plan.helicopters[a].park)) {
                    self.occ.add(self.traj(a), b, back_at, self.inst.horizon(), 1);
                    self.sims[a].fly(self.inst, b, t);
                    self.sims[a].moved_off_start = true;
                    return Ok(Some(self.next_decision(a)));
                }
            }
            let dep = shift.start.max(self.earliest(a));
            if dep > t {
                return Ok(Some(dep));
            }
            if shift.stops == Some(0) {
                self.sims[a].shift += 1;
                continue;
            }
            match self.try_stop(a, t, &shift, 0) {
                Ok(c) => {
                    self.sims[a].open = Some(ShiftOutcome {
                        shift: self.sims[a].shift,
                        departure: t,
                        arrival: t,
                        stops: 0,
                        drops: 0,
                        base: c.last().base,
                    });
                    self.commit(a, t, c);
                    return Ok(Some(self.sims[a].line.len()));
                }
                Err(Reject::Blocked) => return Ok(Some(t + 1)),
                Err(Reject::Unfit) => {}
            }
            if self.sims[a].loc == start && !self.sims[a].moved_off_start {
                // Rest at a base first, then retry the same shift from there.
                if let Some((b, back_at)) = self.free_base(a, start, t, shift.base) {
                    self.occ.add(self.traj(a), b, back_at, self.inst.horizon(), 1);
                    self.sims[a].fly(self.inst, b, t);
                    self.sims[a].moved_off_start = true;
                    return Ok(Some(self.next_decision(a)));
                }
            }
            self.sims[a].shift += 1;
        }
    }

    /// A base with room from the arrival to the horizon end, reached from
    /// `from` leaving at `d`: `preferred` if it qualifies, else the closest.
    fn free_base(&self, a: usize, from: NodeIdx, d: usize, preferred: Option<NodeIdx>) -> Option<(NodeIdx, usize)> {
        let inst = self.inst;
        let ha = HeliIdx(a);
        let horizon = inst.horizon();
        let ok = |b: NodeIdx| {
            let back = d + inst.travel(from, b, ha)? as usize;
            (back < horizon && self.occ.base_fits(inst, b, back)).then_some((b, back))
        };
        if let Some(hit) = preferred.filter(|&b| inst.is_base(b)).and_then(ok) {
            return Some(hit);
        }
        let usable: Vec<NodeIdx> = inst.bases().iter().copied().filter(|&b| ok(b).is_some()).collect();
        closest(inst, from, &usable, ha).and_then(ok)
    }

    /// The next stop of `shift` after `done` stops, leaving at `t`. A load
    /// is admitted only together with the drop that follows it, unless the
    /// shift ends right after the load.
    fn try_stop(&mut self, a: usize, t: usize, shift: &Shift, done: u32) -> std::result::Result<Leg, Reject> {
        let first = self.try_one(a, t, shift, None)?;
        let then = if first.p == 0 && shift.stops != Some(done + 1) {
            Some(self.try_one(a, t, shift, Some(first))?)
        } else {
            None
        };
        Ok(Leg { first, then })
    }

    /// One stop from where the helicopter is at `t`, or, given `after`, the
    /// drop that would follow that load.
    fn try_one(&mut self, a: usize, t: usize, shift: &Shift, after: Option<Stop>) -> std::result::Result<Stop, Reject> {
        let inst = self.inst;
        let ha = HeliIdx(a);
        let h = &inst.helicopters[a];
        let w = h.trajectory.0;
        let horizon = inst.horizon();
        let tp = &self.plan.trajectories;
        self.trajs[w].settle(t);
        let stay = |i: NodeIdx| inst.service_time(i, ha) as usize;
        let mut ts = self.trajs[w].clone();
        let (from, leave, p) = match after {
            Some(l) => {
                let s = l.arrival;
                ts.register(tp, w, 0, l.choice, s, s + stay(l.node) - 1);
                (l.node, s + stay(l.node), 1)
            }
            None => (self.sims[a].loc, t, usize::from(self.sims[a].loaded)),
        };
        let arr = |i: NodeIdx| inst.travel(from, i, ha).map(|l| leave + l as usize);
        let (node, s, choice) = ts.pick(tp, w, p, &arr, &stay).ok_or(Reject::Unfit)?;
        let done = s + stay(node);
        if done >= horizon {
            return Err(Reject::Unfit);
        }
        if !self.occ.stay_fits(inst, w, node, s, done) {
            return Err(Reject::Blocked);
        }
        // The base held for the previous stop, or the one being left, is
        // free for this one.
        let held = self.sims[a].reserved;
        let here = self.sims[a].loc;
        let leaving = inst.is_base(here).then_some((here, t));
        for (b, at) in held.into_iter().chain(leaving) {
            self.occ.add(w, b, at, horizon, -1);
        }
        let found = self.free_base(a, node, done, shift.base.or(held.map(|r| r.0)));
        for (b, at) in held.into_iter().chain(leaving) {
            self.occ.add(w, b, at, horizon, 1);
        }
        let Some((base, back_at)) = found else {
            let in_time = inst
                .bases()
                .iter()
                .any(|&b| inst.travel(node, b, ha).is_some_and(|l| done + (l as usize) < horizon));
            return Err(if in_time { Reject::Blocked } else { Reject::Unfit });
        };
        let busy = (back_at - t) as i64;
        let counter = if inst.is_base(here) { 0 } else { self.sims[a].counter };
        let fits = counter + busy <= i64::from(h.max_consecutive_flight)
            && self.sims[a].total + busy <= i64::from(h.max_total_flight);
        if !fits {
            return Err(Reject::Unfit);
        }
        Ok(Stop {
            node,
            p,
            choice,
            arrival: s,
            base,
            back_at,
        })
    }

    fn commit(&mut self, a: usize, t: usize, leg: Leg) {
        let inst = self.inst;
        let ha = HeliIdx(a);
        let w = self.traj(a);
        let horizon = inst.horizon();
        let tp = &self.plan.trajectories;
        let here = self.sims[a].loc;
        if inst.is_base(here) {
            self.occ.add(w, here, t, horizon, -1);
        }
        if let Some((b, at)) = self.sims[a].reserved.take() {
            self.occ.add(w, b, at, horizon, -1);
        }
        let mut dep = t;
        for (n, c) in std::iter::once(leg.first).chain(leg.then).enumerate() {
            if n > 0 {
                self.sims[a].hover(inst);
                dep = self.sims[a].line.len();
            }
            let s = self.sims[a].fly(inst, c.node, dep);
            debug_assert_eq!(s, c.arrival);
            let alpha = inst.service_time(c.node, ha) as usize;
            self.trajs[w].register(tp, w, c.p, c.choice, s, s + alpha - 1);
            self.occ.add(w, c.node, s, s + alpha, 1);
        }
        let end = leg.last();
        self.occ.add(w, end.base, end.back_at, horizon, 1);
        self.sims[a].reserved = Some((end.base, end.back_at));
        if let Some(o) = &mut self.sims[a].open {
            o.base = end.base;
        }
        self.sims[a].leg_stops = if leg.then.is_some() { 2 } else { 1 };
        self.sims[a].phase = Phase::Serving;
    }

    fn return_to_base(&mut self, a: usize, t: usize) {
        let (base, at) = self.sims[a].reserved.take().expect("admitted stops hold a base");
        let arrival = self.sims[a].fly(self.inst, base, t);
        debug_assert_eq!(arrival, at);
        if let Some(mut o) = self.sims[a].open.take() {
            o.arrival = arrival;
            o.base = base;
            self.sims[a].outcomes.push(o);
        }
        self.sims[a].phase = Phase::Waiting;
        self.sims[a].shift += 1;
    }

    fn finish(&mut self, a: usize) -> Result<()> {
        let inst = self.inst;
        let horizon = inst.horizon();
        let h = &inst.helicopters[a];
        if self.sims[a].loc == h.start {
            let hp = &self.plan.helicopters[a];
            let earliest = self.earliest(a);
            let mut order = vec![hp.park];
            order.extend(inst.bases().iter().copied().filter(|&b| b != hp.park));
            let pick = order.into_iter().filter(|&b| inst.is_base(b)).find_map(|b| {
                let lambda = inst.travel(h.start, b, HeliIdx(a))? as usize;
                let latest = (horizon - 1).checked_sub(lambda)?;
                if latest < earliest {
                    return None;
                }
                let dep = hp.park_departure.clamp(earliest, latest);
                // Leave earlier if the base is full at the preferred time.
                (earliest..=dep)
                    .rev()
                    .find(|&d| self.occ.base_fits(inst, b, d + lambda))
                    .map(|d| (b, d, d + lambda))
            });
            let Some((b, dep, at)) = pick else {
                return Err(Error::Construction(format!(
                    "helicopter {} cannot reach a base with room before the horizon ends",
                    h.id
                )));
            };
            self.occ.add(self.traj(a), b, at, horizon, 1);
            self.sims[a].fly(inst, b, dep);
        }
        self.sims[a].stay_until(horizon);
        self.sims[a].phase = Phase::Done;
        Ok(())
    }
}
