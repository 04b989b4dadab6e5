use super::ledger::{service_part, Derived};
use super::report::{ConstraintRef, RowIndex, RowKey, Violation, ViolationReport};
use crate::model::{Activity, HeliIdx, Instance, NodeIdx, NodeKind, Partition, Schedule, StructureError, TrajIdx};

const TOL: f64 = 1e-6;

/// Evaluates every constraint family against a schedule.
///
/// Quantities that the model treats as decision variables but that a
/// concrete schedule determines (events, counters, trajectory associations,
/// the blank-time slack) are derived first; each violated row is then
/// reported under the same key the MILP uses.
pub fn check_schedule(instance: &Instance, schedule: &Schedule) -> Result<ViolationReport, StructureError> {
    let derived = Derived::new(instance, schedule)?;
    Ok(check_with(instance, schedule, &derived))
}

/// Same as [`check_schedule`] with precomputed derived quantities.
pub fn check_with(instance: &Instance, schedule: &Schedule, derived: &Derived) -> ViolationReport {
    let mut cx = Checker {
        inst: instance,
        sched: schedule,
        d: derived,
        out: Vec::new(),
    };
    cx.capacities();
    cx.water_state();
    cx.stays();
    cx.event_links();
    cx.regulation();
    cx.endpoints();
    cx.movement();
    cx.trajectories();
    ViolationReport::from_unsorted(cx.out)
}

struct Checker<'a> {
    inst: &'a Instance,
    sched: &'a Schedule,
    d: &'a Derived,
    out: Vec<Violation>,
}

impl Checker<'_> {
    fn push(&mut self, n: u8, index: RowIndex, message: String) {
        self.out.push(Violation {
            row: RowKey::new(ConstraintRef::Model(n), index),
            message,
        });
    }

    fn horizon(&self) -> usize {
        self.inst.horizon()
    }

    fn y(&self, i: NodeIdx, a: usize, t: usize) -> bool {
        self.sched.timelines[a][t] == Activity::At(i)
    }

    fn id(&self, i: NodeIdx) -> &str {
        &self.inst.node(i).id
    }

    fn hid(&self, a: usize) -> &str {
        &self.inst.helicopters[a].id
    }

    fn n_helis(&self) -> usize {
        self.sched.timelines.len()
    }

    fn arrivals(&self, a: usize) -> Vec<(NodeIdx, usize)> {
        let line = &self.sched.timelines[a];
        (1..line.len())
            .filter_map(|t| match line[t] {
                Activity::At(i) if line[t - 1] != Activity::At(i) => Some((i, t)),
                _ => None,
            })
            .collect()
    }

    /// Flight take-offs after the first interval, as `(edge, t)`.
    fn takeoffs(&self, a: usize) -> Vec<(crate::model::EdgeIdx, usize)> {
        let line = &self.sched.timelines[a];
        (1..line.len())
            .filter_map(|t| match line[t] {
                Activity::Fly(e) if line[t - 1] != Activity::Fly(e) => Some((e, t)),
                _ => None,
            })
            .collect()
    }

    // 1 to 4
    fn capacities(&mut self) {
        let inst = self.inst;
        for t in 0..self.horizon() {
            for &i in inst.bases() {
                let NodeKind::RestBase { capacity } = inst.node(i).kind else { continue };
                let count = (0..self.n_helis()).filter(|&a| self.y(i, a, t)).count();
                if count > capacity as usize {
                    self.push(
                        1,
                        RowIndex::default().i(i.0).t(t + 1),
                        format!("{count} helicopters at base {} (capacity {capacity})", self.id(i)),
                    );
                }
            }
            for (k, &i) in inst.waters().iter().enumerate() {
                let NodeKind::WaterPoint {
                    capacity_liters,
                    simultaneous,
                } = inst.node(i).kind
                else {
                    continue;
                };
                let present: Vec<usize> = (0..self.n_helis()).filter(|&a| self.y(i, a, t)).collect();
                if present.len() > simultaneous as usize {
                    self.push(
                        2,
                        RowIndex::default().i(i.0).t(t + 1),
                        format!(
                            "{} helicopters loading at {} (limit {simultaneous})",
                            present.len(),
                            self.id(i)
                        ),
                    );
                }
                let demand: f64 = present.iter().map(|&a| inst.helicopters[a].water_capacity).sum();
                if t == 0 {
                    if demand > capacity_liters + TOL {
                        self.push(
                            4,
                            RowIndex::default().i(i.0),
                            format!("loading {demand} l at {} exceeds {capacity_liters} l", self.id(i)),
                        );
                    }
                } else {
                    let left = self.d.water.remaining[k][t];
                    if demand > left + TOL {
                        self.push(
                            3,
                            RowIndex::default().i(i.0).t(t + 1),
                            format!("loading {demand} l at {} with {left} l left", self.id(i)),
                        );
                    }
                }
            }
        }
    }

    // 5 and 6
    fn water_state(&mut self) {
        let inst = self.inst;
        for a in 0..self.n_helis() {
            for t in 0..self.horizon() {
                let z = self.d.flight.water_state[a][t];
                let here = self.sched.timelines[a][t].node();
                for &i in inst.fires() {
                    let y = i64::from(here == Some(i));
                    if y > z {
                        self.push(
                            5,
                            RowIndex::default().i(i.0).a(a).t(t + 1),
                            format!("{} at {} with load state {z}", self.hid(a), self.id(i)),
                        );
                    }
                    if z >= 0 && here.is_none_or(|h| !inst.is_fire(h)) {
                        break;
                    }
                }
                for &i in inst.waters() {
                    let y = i64::from(here == Some(i));
                    if y > 1 - z {
                        self.push(
                            6,
                            RowIndex::default().i(i.0).a(a).t(t + 1),
                            format!("{} at {} with load state {z}", self.hid(a), self.id(i)),
                        );
                    }
                    if z <= 1 && here.is_none_or(|h| !inst.is_water(h)) {
                        break;
                    }
                }
            }
        }
    }

    // 7 to 9
    fn stays(&mut self) {
        let inst = self.inst;
        let last = self.horizon() - 1;
        for a in 0..self.n_helis() {
            for (i, t) in self.arrivals(a) {
                if !inst.is_service(i) {
                    continue;
                }
                let alpha = inst.service_time(i, HeliIdx(a)) as usize;
                if alpha > 1 {
                    for l in t + 1..=last.min(t + alpha - 1) {
                        if !self.y(i, a, l) {
                            self.push(
                                7,
                                RowIndex::default().i(i.0).a(a).t(t + 1).l(l + 1),
                                format!(
                                    "{} leaves {} at {} before its {alpha}-interval stay ends",
                                    self.hid(a),
                                    self.id(i),
                                    l + 1
                                ),
                            );
                        }
                    }
                }
                let target = last.min(t + alpha);
                let (n, stream) = if inst.is_fire(i) {
                    (8, &self.d.events.drop_end)
                } else {
                    (9, &self.d.events.load_end)
                };
                if stream[a][target] != Some(i) {
                    self.push(
                        n,
                        RowIndex::default().i(i.0).a(a).t(t + 1),
                        format!(
                            "{} arrives at {} at {} but does not finish there at {}",
                            self.hid(a),
                            self.id(i),
                            t + 1,
                            target + 1
                        ),
                    );
                }
            }
        }
    }

    // 10 to 18 and 44 to 46: the event streams against presence.
    fn event_links(&mut self) {
        let inst = self.inst;
        let ev = &self.d.events;
        for a in 0..self.n_helis() {
            if let Some(i) = ev.rest_end[a][0] {
                self.push(44, RowIndex::default().i(i.0).a(a), format!("{} ends a rest at interval 1", self.hid(a)));
            }
            if let Some(i) = ev.load_end[a][0] {
                self.push(45, RowIndex::default().i(i.0).a(a), format!("{} ends a load at interval 1", self.hid(a)));
            }
            if let Some(i) = ev.drop_end[a][0] {
                self.push(46, RowIndex::default().i(i.0).a(a), format!("{} ends a drop at interval 1", self.hid(a)));
            }
            for t in 0..self.horizon() {
                let here = self.sched.timelines[a][t].node();
                let prev = if t > 0 { self.sched.timelines[a][t - 1].node() } else { None };
                let mut nodes: Vec<NodeIdx> = [here, prev, ev.rest_end[a][t], ev.load_end[a][t], ev.drop_end[a][t]]
                    .into_iter()
                    .flatten()
                    .collect();
                if t > 0 {
                    nodes.extend(ev.rest_end[a][t - 1]);
                }
                nodes.sort();
                nodes.dedup();
                for i in nodes {
                    let y = self.y(i, a, t);
                    let y_prev = t > 0 && self.y(i, a, t - 1);
                    let (hid, nid) = (self.hid(a).to_string(), self.id(i).to_string());
                    let msg = |what: &str| format!("{hid} {what} at {nid} in {}", t + 1);
                    match inst.partition(i) {
                        Partition::Base => {
                            let e = ev.rest_end[a][t] == Some(i);
                            let e_prev = t > 0 && ev.rest_end[a][t - 1] == Some(i);
                            if t > 0 && y_prev && !y && !e_prev {
                                let m = msg("leaves a base without ending a rest");
                                self.push(10, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                            if e && !y {
                                let m = msg("ends a rest away from the base");
                                self.push(11, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                            if t > 0 && y && e_prev {
                                let m = msg("stays after ending a rest");
                                self.push(12, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                        }
                        Partition::Water | Partition::Wildfire if t > 0 => {
                            let fire = inst.is_fire(i);
                            let stream = if fire { &ev.drop_end } else { &ev.load_end };
                            let done = stream[a][t] == Some(i);
                            let base = if fire { 16 } else { 13 };
                            if y_prev && !y && !done {
                                let m = msg("leaves without finishing");
                                self.push(base, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                            if done && !y_prev {
                                let m = msg("finishes without having been there");
                                self.push(base + 1, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                            if done && y {
                                let m = msg("is still there after finishing");
                                self.push(base + 2, RowIndex::default().i(i.0).a(a).t(t + 1), m);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
    }

    // 19 to 23
    fn regulation(&mut self) {
        let inst = self.inst;
        let horizon = self.horizon();
        for a in 0..self.n_helis() {
            let heli = &inst.helicopters[a];
            let active = (0..horizon)
                .filter(|&t| self.sched.is_active(inst, HeliIdx(a), t))
                .count() as u32;
            if heli.total_flight + active > heli.max_total_flight {
                self.push(
                    19,
                    RowIndex::default().a(a),
                    format!(
                        "{} reaches {} flight intervals (limit {})",
                        self.hid(a),
                        heli.total_flight + active,
                        heli.max_total_flight
                    ),
                );
            }
            let mcf = i64::from(heli.max_consecutive_flight);
            for t in 0..horizon {
                let c = self.d.flight.consecutive[a][t];
                if c > mcf {
                    self.push(
                        20,
                        RowIndex::default().a(a).t(t + 1),
                        format!("{} has {c} consecutive flight intervals (limit {mcf})", self.hid(a)),
                    );
                }
                if c < 0 {
                    self.push(21, RowIndex::default().a(a).t(t + 1), format!("{} counter is {c}", self.hid(a)));
                }
            }
            let mr = heli.min_rest as usize;
            for t in 1..horizon {
                let Some(i) = self.sched.timelines[a][t].node() else { continue };
                if !inst.is_base(i) {
                    continue;
                }
                let len = mr.min(horizon - t);
                let y_prev = i64::from(self.y(i, a, t - 1));
                let e_prev = i64::from(self.d.events.rest_end[a][t - 1] == Some(i));
                let need = len as i64 * (1 - y_prev + e_prev);
                let have = (t..t + len).filter(|&l| self.y(i, a, l)).count() as i64;
                if have < need {
                    self.push(
                        22,
                        RowIndex::default().i(i.0).a(a).t(t + 1),
                        format!(
                            "{} rests {have} intervals at {} from {} (needs {need})",
                            self.hid(a),
                            self.id(i),
                            t + 1
                        ),
                    );
                }
            }
            let (mr, ri) = (heli.min_rest, heli.consecutive_rest);
            if mr > ri && ri > 0 {
                let need = (mr - ri) as usize;
                let have = (0..need.min(horizon)).filter(|&l| self.y(heli.start, a, l)).count();
                if have < need {
                    self.push(
                        23,
                        RowIndex::default().i(heli.start.0).a(a),
                        format!("{} must finish {need} rest intervals before leaving", self.hid(a)),
                    );
                }
            }
        }
    }

    // 24 and 25
    fn endpoints(&mut self) {
        let inst = self.inst;
        let last = self.horizon() - 1;
        for a in 0..self.n_helis() {
            let end = self.sched.timelines[a][last];
            if !end.node().is_some_and(|i| inst.is_base(i)) {
                self.push(24, RowIndex::default().a(a), format!("{} does not end at a base", self.hid(a)));
            }
            let start = inst.helicopters[a].start;
            if !self.y(start, a, 0) {
                self.push(
                    25,
                    RowIndex::default().a(a),
                    format!("{} does not begin at {}", self.hid(a), self.id(start)),
                );
            }
        }
    }

    // 26 to 32
    fn movement(&mut self) {
        let inst = self.inst;
        let horizon = self.horizon();
        let last = horizon - 1;
        for a in 0..self.n_helis() {
            let line = &self.sched.timelines[a];
            for (e, t) in self.takeoffs(a) {
                let edge = inst.edge(e);
                let lambda = inst.flight_time(e, HeliIdx(a)) as usize;
                let idx = RowIndex::default().i(edge.from.0).j(edge.to.0).a(a).t(t + 1);
                let target = last.min(t + lambda);
                if !self.y(edge.to, a, target) {
                    self.push(
                        26,
                        idx,
                        format!(
                            "{} leaving {} at {} is not at {} at {}",
                            self.hid(a),
                            self.id(edge.from),
                            t + 1,
                            self.id(edge.to),
                            target + 1
                        ),
                    );
                }
                if !self.y(edge.from, a, t - 1) {
                    self.push(27, idx, format!("{} takes off from {} without being there", self.hid(a), self.id(edge.from)));
                }
                for l in t..=last.min(t + lambda - 1) {
                    if line[l] != Activity::Fly(e) {
                        self.push(
                            30,
                            idx.l(l + 1),
                            format!("{} flight {}->{} ends early", self.hid(a), self.id(edge.from), self.id(edge.to)),
                        );
                    }
                }
            }
            for t in 1..horizon {
                if let Activity::At(j) = line[t] {
                    if inst.partition(j) != Partition::Start {
                        let ok = match line[t - 1] {
                            Activity::At(p) => p == j,
                            Activity::Fly(e) => inst.edge(e).to == j,
                            Activity::Unplaced => false,
                        };
                        if !ok {
                            self.push(
                                28,
                                RowIndex::default().i(j.0).a(a).t(t + 1),
                                format!("{} appears at {} without arriving", self.hid(a), self.id(j)),
                            );
                        }
                    }
                }
            }
            for t in 0..last {
                if let Activity::At(i) = line[t] {
                    if line[t + 1] != Activity::At(i) {
                        let ok = matches!(line[t + 1], Activity::Fly(e) if inst.edge(e).from == i);
                        if !ok {
                            self.push(
                                29,
                                RowIndex::default().i(i.0).a(a).t(t + 1),
                                format!("{} leaves {} without flying", self.hid(a), self.id(i)),
                            );
                        }
                    }
                }
            }
            // Last interval at which each node is left by a flight.
            let mut last_out: Vec<Option<usize>> = vec![None; inst.nodes.len()];
            for (t, act) in line.iter().enumerate() {
                if let Activity::Fly(e) = act {
                    last_out[inst.edge(*e).from.0] = Some(t);
                }
            }
            for (t, act) in line.iter().enumerate() {
                let Activity::Fly(e) = act else { continue };
                let j = inst.edge(*e).to;
                let leaves_later = last_out[j.0].is_some_and(|l| l > t);
                match inst.partition(j) {
                    Partition::Water | Partition::Wildfire if !leaves_later => self.push(
                        31,
                        RowIndex::default().i(j.0).a(a).t(t + 1),
                        format!("{} flies into {} and never leaves it", self.hid(a), self.id(j)),
                    ),
                    Partition::Base if !leaves_later && !self.y(j, a, last) => self.push(
                        32,
                        RowIndex::default().i(j.0).a(a).t(t + 1),
                        format!("{} flies into base {} and neither leaves nor ends there", self.hid(a), self.id(j)),
                    ),
                    _ => {}
                }
            }
        }
    }

    // 34 to 41. Row 34 holds by construction of the trajectory ledger.
    fn trajectories(&mut self) {
        let inst = self.inst;
        let horizon = self.horizon();
        let tl = &self.d.trajectories;
        for w in 0..inst.trajectories.len() {
            let wid = &inst.trajectories[w];
            for part in 0..2 {
                let r = &tl.node[w][part];
                for t in 1..horizon {
                    if let Some(i) = r[t - 1] {
                        if r[t] != Some(i) && !tl.can_change[w][t] {
                            self.push(
                                35,
                                RowIndex::default().i(i.0).w(w).t(t + 1),
                                format!("trajectory {wid} drops {} at {} without an evolution", self.id(i), t + 1),
                            );
                        }
                    }
                    if let Some(i) = r[t] {
                        if r[t - 1] != Some(i) && !tl.change[w][t] {
                            self.push(
                                36,
                                RowIndex::default().i(i.0).w(w).t(t + 1),
                                format!("trajectory {wid} adopts {} without counting a change", self.id(i)),
                            );
                        }
                    }
                }
            }
            for t in 1..horizon {
                let cw = i64::from(tl.can_change[w][t]);
                let cw_prev = i64::from(tl.can_change[w][t - 1]);
                let aux_prev = i64::from(tl.change[w][t - 1]);
                let ev = i64::from(inst.evolves_at(t));
                let idx = RowIndex::default().w(w).t(t + 1);
                if cw > ev + cw_prev - aux_prev {
                    self.push(37, idx, format!("trajectory {wid} changes twice without a new evolution before {}", t + 1));
                }
                if cw < cw_prev - aux_prev {
                    self.push(38, idx, format!("trajectory {wid} loses its change permission at {}", t + 1));
                }
                if cw < ev {
                    self.push(39, idx, format!("trajectory {wid} ignores the evolution at {}", t + 1));
                }
            }
            let members = inst.members(TrajIdx(w));
            for t in 0..horizon {
                let mut seen: Vec<(NodeIdx, usize)> = Vec::new();
                for &a in members {
                    let Some(i) = self.sched.at(a, t) else { continue };
                    let Some(part) = service_part(inst, i) else { continue };
                    match seen.iter_mut().find(|(n, _)| *n == i) {
                        Some((_, c)) => *c += 1,
                        None => seen.push((i, 1)),
                    }
                    if tl.node[w][part][t] != Some(i) {
                        self.push(
                            41,
                            RowIndex::default().i(i.0).w(w).a(a.0).t(t + 1),
                            format!("{} uses {} outside trajectory {wid}'s assignment", self.hid(a.0), self.id(i)),
                        );
                    }
                }
                for (i, c) in seen {
                    if c > 1 {
                        self.push(
                            40,
                            RowIndex::default().i(i.0).w(w).t(t + 1),
                            format!("{c} members of {wid} at {} at {}", self.id(i), t + 1),
                        );
                    }
                }
            }
        }
    }
}
