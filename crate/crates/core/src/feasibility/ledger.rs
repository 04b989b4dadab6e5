use crate::model::{Activity, HeliIdx, Instance, NodeIdx, Partition, Schedule, StructureError, TrajIdx};

/// Event streams derived from a schedule, one entry per helicopter and
/// 0-based interval. An entry names the node where the event happens.
///
/// A stay at a water point or wildfire node over `[s, s+α-1]` completes its
/// load or drop at `s+α`, the first interval after leaving. A rest ends at the
/// last interval spent at the base before leaving; staying until the horizon
/// end closes no rest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Events {
    /// `e`: rest ends at a base.
    pub rest_end: Vec<Vec<Option<NodeIdx>>>,
    /// `ec`: loads completed at a water point.
    pub load_end: Vec<Vec<Option<NodeIdx>>>,
    /// `ed`: drops completed at a wildfire node.
    pub drop_end: Vec<Vec<Option<NodeIdx>>>,
}

pub fn derive_events(instance: &Instance, schedule: &Schedule) -> Result<Events, StructureError> {
    schedule.check_structure(instance)?;
    Ok(derive_events_unchecked(instance, schedule))
}

pub(crate) fn derive_events_unchecked(instance: &Instance, schedule: &Schedule) -> Events {
    let horizon = instance.horizon();
    let n = schedule.timelines.len();
    let mut ev = Events {
        rest_end: vec![vec![None; horizon]; n],
        load_end: vec![vec![None; horizon]; n],
        drop_end: vec![vec![None; horizon]; n],
    };
    for (a, line) in schedule.timelines.iter().enumerate() {
        for t in 1..horizon {
            if let Activity::At(i) = line[t - 1] {
                if line[t] != Activity::At(i) {
                    match instance.partition(i) {
                        Partition::Water => ev.load_end[a][t] = Some(i),
                        Partition::Wildfire => ev.drop_end[a][t] = Some(i),
                        Partition::Base => ev.rest_end[a][t - 1] = Some(i),
                        Partition::Start => {}
                    }
                }
            }
        }
    }
    ev
}

/// Water drawn from each water point, indexed by the point's rank within the
/// water partition.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterLedger {
    /// `cnta`: liters drawn up to and including each interval.
    pub cumulative_drawn: Vec<Vec<f64>>,
    /// `ca`: liters available at the start of each interval.
    pub remaining: Vec<Vec<f64>>,
}

pub fn build_water_ledger(instance: &Instance, schedule: &Schedule) -> Result<WaterLedger, StructureError> {
    let events = derive_events(instance, schedule)?;
    Ok(water_ledger(instance, &events))
}

pub(crate) fn water_ledger(instance: &Instance, events: &Events) -> WaterLedger {
    let horizon = instance.horizon();
    let waters = instance.waters();
    let mut drawn = vec![vec![0.0; horizon]; waters.len()];
    for (a, stream) in events.load_end.iter().enumerate() {
        let wc = instance.helicopters[a].water_capacity;
        for (t, ev) in stream.iter().enumerate() {
            if let Some(i) = ev {
                drawn[instance.rank(*i)][t] += wc;
            }
        }
    }
    let mut remaining = vec![vec![0.0; horizon]; waters.len()];
    for (k, &i) in waters.iter().enumerate() {
        let cap = match instance.node(i).kind {
            crate::model::NodeKind::WaterPoint { capacity_liters, .. } => capacity_liters,
            _ => 0.0,
        };
        for t in 1..horizon {
            drawn[k][t] += drawn[k][t - 1];
        }
        remaining[k][0] = cap;
        for t in 1..horizon {
            remaining[k][t] = cap - drawn[k][t - 1];
        }
    }
    WaterLedger {
        cumulative_drawn: drawn,
        remaining,
    }
}

/// Per-helicopter counters, indexed by helicopter then 0-based interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlightLedger {
    /// `cntv`: consecutive activity counter including the pad.
    pub consecutive: Vec<Vec<i64>>,
    /// `z`: 1 while carrying water.
    pub water_state: Vec<Vec<i64>>,
    /// `faux`: smallest nondecreasing pad keeping `cntv` nonnegative.
    pub pad: Vec<Vec<i64>>,
}

impl FlightLedger {
    /// Final pad value summed over the fleet.
    pub fn final_pad_sum(&self) -> i64 {
        self.pad.iter().filter_map(|p| p.last()).sum()
    }
}

pub fn build_flight_ledger(instance: &Instance, schedule: &Schedule) -> Result<FlightLedger, StructureError> {
    let events = derive_events(instance, schedule)?;
    Ok(flight_ledger(instance, schedule, &events))
}

pub(crate) fn flight_ledger(instance: &Instance, schedule: &Schedule, events: &Events) -> FlightLedger {
    let horizon = instance.horizon();
    let n = schedule.timelines.len();
    let mut out = FlightLedger {
        consecutive: vec![vec![0; horizon]; n],
        water_state: vec![vec![0; horizon]; n],
        pad: vec![vec![0; horizon]; n],
    };
    for a in 0..n {
        let heli = &instance.helicopters[a];
        let mcf = i64::from(heli.max_consecutive_flight);
        let mut raw = i64::from(heli.consecutive_flight);
        let mut pad = 0i64;
        let mut z = i64::from(heli.initially_loaded);
        for t in 0..horizon {
            if schedule.is_active(instance, HeliIdx(a), t) {
                raw += 1;
            }
            if events.rest_end[a][t].is_some() {
                raw -= mcf;
            }
            pad = pad.max(-raw);
            out.consecutive[a][t] = raw + pad;
            out.pad[a][t] = pad;
            if t > 0 {
                z += i64::from(events.load_end[a][t].is_some()) - i64::from(events.drop_end[a][t].is_some());
            }
            out.water_state[a][t] = z;
        }
    }
    out
}

/// Trajectory variables reconstructed from what the members actually do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryLedger {
    /// `r`: associated water point (`[w][0][t]`) and wildfire node
    /// (`[w][1][t]`).
    pub node: Vec<[Vec<Option<NodeIdx>>; 2]>,
    /// `aux`: the trajectory switches a node at this interval.
    pub change: Vec<Vec<bool>>,
    /// `cw`: the trajectory may switch at this interval.
    pub can_change: Vec<Vec<bool>>,
}

impl TrajectoryLedger {
    pub fn changes(&self) -> usize {
        self.change.iter().flatten().filter(|&&c| c).count()
    }

    pub fn associated(&self, w: TrajIdx, i: NodeIdx, part: usize, t: usize) -> bool {
        self.node[w.0][part][t] == Some(i)
    }
}

/// 0 for water points, 1 for wildfire nodes.
pub(crate) fn service_part(instance: &Instance, i: NodeIdx) -> Option<usize> {
    match instance.partition(i) {
        Partition::Water => Some(0),
        Partition::Wildfire => Some(1),
        _ => None,
    }
}

/// Builds `r`, `aux` and `cw`. At each interval the trajectory is associated
/// with the lowest-index node its members use in each partition. Between two
/// different nodes the switch happens as late as possible, and switches of
/// the two partitions share an interval whenever their windows overlap so
/// that they count as a single change.
pub fn build_trajectory_ledger(instance: &Instance, schedule: &Schedule) -> TrajectoryLedger {
    let horizon = instance.horizon();
    let n_w = instance.trajectories.len();
    let mut out = TrajectoryLedger {
        node: (0..n_w).map(|_| [vec![None; horizon], vec![None; horizon]]).collect(),
        change: vec![vec![false; horizon]; n_w],
        can_change: vec![vec![false; horizon]; n_w],
    };
    for w in 0..n_w {
        let members = instance.members(TrajIdx(w));
        let mut used: [Vec<Option<NodeIdx>>; 2] = [vec![None; horizon], vec![None; horizon]];
        for &a in members {
            for t in 0..horizon {
                if let Some(i) = schedule.at(a, t) {
                    if let Some(p) = service_part(instance, i) {
                        let slot = &mut used[p][t];
                        if slot.is_none_or(|cur| i < cur) {
                            *slot = Some(i);
                        }
                    }
                }
            }
        }
        // Segments of identical consecutive uses, and the windows where the
        // switch between two segments may happen.
        let mut firsts: [Vec<NodeIdx>; 2] = [Vec::new(), Vec::new()];
        let mut windows: Vec<(usize, usize, usize, usize)> = Vec::new();
        for p in 0..2 {
            let mut last: Option<(NodeIdx, usize)> = None;
            for t in 0..horizon {
                if let Some(i) = used[p][t] {
                    match last {
                        None => firsts[p].push(i),
                        Some((prev, at)) if prev != i => {
                            windows.push((t, at + 1, p, firsts[p].len()));
                            firsts[p].push(i);
                        }
                        _ => {}
                    }
                    last = Some((i, t));
                }
            }
        }
        windows.sort();
        let mut switch_at: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut point: Option<usize> = None;
        for &(hi, lo, p, _) in &windows {
            let chosen = match point {
                Some(q) if q >= lo && q <= hi => q,
                _ => hi,
            };
            point = Some(chosen);
            switch_at[p].push(chosen);
        }
        for p in 0..2 {
            if firsts[p].is_empty() {
                continue;
            }
            let mut k = 0;
            for t in 0..horizon {
                while k < switch_at[p].len() && switch_at[p][k] <= t {
                    k += 1;
                }
                out.node[w][p][t] = Some(firsts[p][k]);
            }
            for &s in &switch_at[p] {
                out.change[w][s] = true;
            }
        }
        for t in 1..horizon {
            out.can_change[w][t] =
                instance.evolves_at(t) || (out.can_change[w][t - 1] && !out.change[w][t - 1]);
        }
    }
    out
}

/// `h1`: 1 at interior intervals where nobody flies, loads or drops.
pub fn blank_slack(instance: &Instance, schedule: &Schedule) -> Vec<f64> {
    let horizon = instance.horizon();
    let mut h1 = vec![0.0; horizon];
    for (t, slot) in h1.iter_mut().enumerate().take(horizon.saturating_sub(1)).skip(1) {
        let busy = instance
            .helicopter_ids()
            .any(|a| schedule.is_active(instance, a, t));
        if !busy {
            *slot = 1.0;
        }
    }
    h1
}

/// Everything the checker, the objective and the MILP assignment need.
#[derive(Debug, Clone)]
pub struct Derived {
    pub events: Events,
    pub water: WaterLedger,
    pub flight: FlightLedger,
    pub trajectories: TrajectoryLedger,
    pub h1: Vec<f64>,
}

impl Derived {
    pub fn new(instance: &Instance, schedule: &Schedule) -> Result<Self, StructureError> {
        let events = derive_events(instance, schedule)?;
        Ok(Self::from_events(instance, schedule, events))
    }

    pub(crate) fn from_events(instance: &Instance, schedule: &Schedule, events: Events) -> Self {
        let water = water_ledger(instance, &events);
        let flight = flight_ledger(instance, schedule, &events);
        Self {
            water,
            flight,
            trajectories: build_trajectory_ledger(instance, schedule),
            h1: blank_slack(instance, schedule),
            events,
        }
    }
}
