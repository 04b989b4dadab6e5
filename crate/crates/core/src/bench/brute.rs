use crate::feasibility::{check_schedule, ConstraintRef, Derived};
use crate::model::{Activity, HeliIdx, Instance, NodeIdx, Partition, Schedule};
use crate::objective::{evaluate_with, normalizers, ObjectiveValue};
use crate::{Error, Result};

/// Largest instance the exhaustive solver accepts.
pub const MAX_HELICOPTERS: usize = 2;
pub const MAX_HORIZON: usize = 12;
pub const MAX_FIRES: usize = 2;
pub const MAX_WATERS: usize = 2;
pub const MAX_BASES: usize = 1;
const MAX_WALKS: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct BruteForce {
    pub schedule: Schedule,
    pub value: ObjectiveValue,
    /// Feasible single-helicopter walks found per helicopter.
    pub walks: Vec<usize>,
    /// Full schedules checked.
    pub evaluated: usize,
}

/// Rows that only involve one helicopter's own timeline.
fn own_row(c: ConstraintRef) -> bool {
    match c {
        ConstraintRef::Model(n) => (5..=32).contains(&n) || (44..=46).contains(&n),
        ConstraintRef::Aux(n) => n == 4 || n == 5 || n == 6,
    }
}

/// Exact optimum by enumeration.
///
/// Every walk of each helicopter that respects the stay, load state, flight
/// budget and final-base rules is listed and screened against the rows that
/// concern that helicopter alone. Combinations are then scanned best-first on
/// a bound that drops the trajectory-change penalty, and each candidate is
/// checked and scored in full.
pub fn brute_force_optimum(instance: &Instance) -> Result<BruteForce> {
    check_bounds(instance)?;
    let n = instance.helicopters.len();
    let mut lists: Vec<Vec<Walk>> = Vec::with_capacity(n);
    for a in instance.helicopter_ids() {
        let mut raw = Vec::new();
        enumerate(instance, a, &mut raw)?;
        let mut walks: Vec<Walk> = raw.into_iter().filter_map(|line| screen(instance, a, line)).collect();
        walks.sort_by(|x, y| y.value.total_cmp(&x.value));
        lists.push(walks);
    }
    let counts: Vec<usize> = lists.iter().map(Vec::len).collect();
    if lists.iter().any(Vec::is_empty) {
        return Err(Error::Construction("some helicopter has no feasible walk".into()));
    }
    let mu5 = instance.weights.mu5;
    let mut best: Option<(f64, Schedule)> = None;
    let mut evaluated = 0usize;
    let mut consider = |lines: Vec<Vec<Activity>>, bound: f64, best: &mut Option<(f64, Schedule)>| -> Result<()> {
        if best.as_ref().is_some_and(|(b, _)| bound <= *b) {
            return Ok(());
        }
        let schedule = Schedule::new(lines);
        evaluated += 1;
        if check_schedule(instance, &schedule)?.is_empty() {
            let total = evaluate_with(instance, &schedule, &Derived::new(instance, &schedule)?).total;
            if best.as_ref().is_none_or(|(b, _)| total > *b) {
                *best = Some((total, schedule));
            }
        }
        Ok(())
    };
    match n {
        1 => {
            for w in &lists[0] {
                let bound = w.value - mu5 * f64::from(w.idle.count_ones());
                if best.as_ref().is_some_and(|(b, _)| w.value <= *b) {
                    break;
                }
                consider(vec![w.line.clone()], bound, &mut best)?;
            }
        }
        2 => {
            let top2 = lists[1][0].value;
            for w1 in &lists[0] {
                if best.as_ref().is_some_and(|(b, _)| w1.value + top2 <= *b) {
                    break;
                }
                for w2 in &lists[1] {
                    let sep = w1.value + w2.value;
                    if best.as_ref().is_some_and(|(b, _)| sep <= *b) {
                        break;
                    }
                    let bound = sep - mu5 * f64::from((w1.idle & w2.idle).count_ones());
                    consider(vec![w1.line.clone(), w2.line.clone()], bound, &mut best)?;
                }
            }
        }
        _ => unreachable!("bounds checked"),
    }
    let (_, schedule) = best.ok_or_else(|| Error::Construction("no feasible schedule exists".into()))?;
    let value = evaluate_with(instance, &schedule, &Derived::new(instance, &schedule)?);
    Ok(BruteForce {
        schedule,
        value,
        walks: counts,
        evaluated,
    })
}

fn check_bounds(instance: &Instance) -> Result<()> {
    let dims = [
        ("helicopters", instance.helicopters.len(), MAX_HELICOPTERS),
        ("intervals", instance.horizon(), MAX_HORIZON),
        ("wildfire nodes", instance.fires().len(), MAX_FIRES),
        ("water points", instance.waters().len(), MAX_WATERS),
        ("bases", instance.bases().len(), MAX_BASES),
    ];
    let over: Vec<String> = dims
        .iter()
        .filter(|(_, have, max)| have > max)
        .map(|(what, have, max)| format!("{have} {what} (max {max})"))
        .collect();
    if over.is_empty() {
        Ok(())
    } else {
        // Rough count of timelines per helicopter: one choice per interval
        // among the nodes plus waiting.
        let choices = instance.nodes.len() as f64 + 1.0;
        let estimate = choices.powi(instance.horizon() as i32).powi(instance.helicopters.len() as i32);
        Err(Error::SearchTooLarge(format!("{}; about {estimate:.1e} schedules", over.join(", "))))
    }
}

#[derive(Debug, Clone)]
struct Walk {
    line: Vec<Activity>,
    /// Objective terms owned by this helicopter alone. The change penalty is
    /// included only when the helicopter is alone in its trajectory.
    value: f64,
    /// Interior intervals where it is not working.
    idle: u32,
}

/// Keeps the walk if no row of its own is violated, with its separable score.
fn screen(instance: &Instance, a: HeliIdx, line: Vec<Activity>) -> Option<Walk> {
    let mut sched = Schedule::parked(instance);
    sched.timelines[a.0] = line;
    let report = check_schedule(instance, &sched).ok()?;
    if report
        .iter()
        .any(|v| own_row(v.row.constraint) && v.row.index.a == Some(a.0))
    {
        return None;
    }
    let d = Derived::new(instance, &sched).ok()?;
    let w = &instance.weights;
    let nz = normalizers(instance);
    let h = instance.heli(a);
    let horizon = instance.horizon();
    let (mut eff, mut flights, mut hover, mut idle) = (0.0, 0.0, 0.0, 0u32);
    for (t, act) in sched.timelines[a.0].iter().enumerate() {
        match *act {
            Activity::Fly(_) => flights += 1.0,
            Activity::At(i) if instance.is_service(i) => {
                hover += 1.0;
                if instance.is_fire(i) {
                    eff += instance.efficiency(i, t) * h.water_capacity;
                }
            }
            _ => {
                if t > 0 && t + 1 < horizon {
                    idle |= 1 << t;
                }
            }
        }
    }
    let faux = *d.flight.pad[a.0].last().unwrap_or(&0) as f64;
    let mut value = eff / nz.ub1 - w.mu2 * flights / nz.ub2 - w.mu3 * hover / nz.ub3 - w.mu6 * faux;
    if instance.members(h.trajectory).len() == 1 {
        let changes = d.trajectories.change[h.trajectory.0].iter().filter(|&&c| c).count() as f64;
        value -= w.mu4 * changes / nz.ub4;
    }
    Some(Walk {
        line: sched.timelines.swap_remove(a.0),
        value,
        idle,
    })
}

struct Walker<'a> {
    inst: &'a Instance,
    a: HeliIdx,
    horizon: usize,
    mcf: i64,
    budget: i64,
    mr: usize,
    out: &'a mut Vec<Vec<Activity>>,
}

/// Lists every timeline that starts at the start position, stays exactly the
/// service time at water points and wildfire nodes, loads only when empty,
/// drops only when loaded, rests the minimum after landing at a base, stays
/// within the flight limits and ends at a base.
fn enumerate(instance: &Instance, a: HeliIdx, out: &mut Vec<Vec<Activity>>) -> Result<()> {
    let h = instance.heli(a);
    let mut w = Walker {
        inst: instance,
        a,
        horizon: instance.horizon(),
        mcf: i64::from(h.max_consecutive_flight),
        budget: i64::from(h.max_total_flight) - i64::from(h.total_flight),
        mr: h.min_rest as usize,
        out,
    };
    let wait = if h.consecutive_rest > 0 && h.consecutive_rest < h.min_rest {
        (h.min_rest - h.consecutive_rest) as usize
    } else {
        0
    };
    let line = vec![Activity::At(h.start)];
    w.leave(line, h.start, wait.max(1), i64::from(h.initially_loaded), i64::from(h.consecutive_flight), 0)?;
    Ok(())
}

impl Walker<'_> {
    /// Waits at `loc` (start or base) and departs at any `d >= earliest`.
    fn leave(&mut self, line: Vec<Activity>, loc: NodeIdx, earliest: usize, z: i64, c: i64, used: i64) -> Result<()> {
        for d in earliest..self.horizon {
            let mut l = line.clone();
            while l.len() < d {
                l.push(Activity::At(loc));
            }
            self.fly_out(&l, loc, z, c, used)?;
        }
        Ok(())
    }

    fn fly_out(&mut self, line: &[Activity], from: NodeIdx, z: i64, c: i64, used: i64) -> Result<()> {
        let d = line.len();
        for &e in self.inst.out_edges(from) {
            let to = self.inst.edge(e).to;
            let lambda = self.inst.flight_time(e, self.a) as usize;
            let arrive = d + lambda;
            if arrive >= self.horizon {
                continue;
            }
            let (c2, used2) = (c + lambda as i64, used + lambda as i64);
            if c2 > self.mcf || used2 > self.budget {
                continue;
            }
            let mut l = line.to_vec();
            l.extend(std::iter::repeat_n(Activity::Fly(e), lambda));
            self.arrive(l, to, z, c2, used2)?;
        }
        Ok(())
    }

    fn arrive(&mut self, mut line: Vec<Activity>, at: NodeIdx, z: i64, c: i64, used: i64) -> Result<()> {
        let s = line.len();
        match self.inst.partition(at) {
            Partition::Base => {
                // Rest to the end, or rest at least the minimum and go again.
                let mut rest = line.clone();
                rest.resize(self.horizon, Activity::At(at));
                self.push(rest)?;
                if s + self.mr < self.horizon {
                    self.leave(line, at, s + self.mr, z, 0, used)?;
                }
                Ok(())
            }
            Partition::Water | Partition::Wildfire => {
                let water = self.inst.is_water(at);
                if (water && z != 0) || (!water && z != 1) {
                    return Ok(());
                }
                let alpha = self.inst.service_time(at, self.a) as usize;
                let (c2, used2) = (c + alpha as i64, used + alpha as i64);
                if s + alpha >= self.horizon || c2 > self.mcf || used2 > self.budget {
                    return Ok(());
                }
                line.extend(std::iter::repeat_n(Activity::At(at), alpha));
                self.fly_out(&line, at, if water { 1 } else { 0 }, c2, used2)
            }
            Partition::Start => Ok(()),
        }
    }

    fn push(&mut self, line: Vec<Activity>) -> Result<()> {
        if self.out.len() >= MAX_WALKS {
            return Err(Error::SearchTooLarge(format!("more than {MAX_WALKS} walks for one helicopter")));
        }
        self.out.push(line);
        Ok(())
    }
}
