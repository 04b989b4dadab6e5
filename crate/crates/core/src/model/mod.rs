//! Problem data: the graph, the helicopter fleet, the time grid and the
//! per-interval wildfire efficiencies.
//!
//! Everything is stored in integer time intervals. Node, helicopter, edge and
//! trajectory references are dense indices into the instance vectors; the
//! string identifiers only matter at the file boundary (see [`format`]).

pub mod format;
mod schedule;
mod validate;

pub use schedule::{Activity, Schedule, StructureError};
pub use validate::{ensure_valid, validate_instance, Diagnostic, Severity};

use crate::objective::ObjectiveWeights;
use serde::{Deserialize, Serialize};
use std::fmt;

macro_rules! index_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn get(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

index_type!(
    /// Position of a node in [`Instance::nodes`].
    NodeIdx
);
index_type!(
    /// Position of a helicopter in [`Instance::helicopters`].
    HeliIdx
);
index_type!(
    /// Position of an edge in [`Instance::edges`].
    EdgeIdx
);
index_type!(
    /// Position of a main trajectory in [`Instance::trajectories`].
    TrajIdx
);

/// Minutes since midnight, used only to label intervals when rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ClockTime(pub u32);

impl ClockTime {
    pub fn parse(text: &str) -> Option<Self> {
        let (h, m) = text.trim().split_once(':')?;
        let h: u32 = h.parse().ok()?;
        let m: u32 = m.parse().ok()?;
        (h < 48 && m < 60).then_some(ClockTime(h * 60 + m))
    }

    pub fn plus_minutes(self, minutes: u32) -> Self {
        ClockTime(self.0 + minutes)
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", (self.0 / 60) % 24, self.0 % 60)
    }
}

impl Serialize for ClockTime {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClockTime {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        ClockTime::parse(&text)
            .ok_or_else(|| serde::de::Error::custom(format!("invalid clock time `{text}`")))
    }
}

/// Discretization of the planning horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub interval_minutes: u32,
    pub horizon_intervals: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_clock: Option<ClockTime>,
}

impl TimeGrid {
    pub fn new(interval_minutes: u32, horizon_intervals: usize) -> Self {
        Self {
            interval_minutes,
            horizon_intervals,
            start_clock: None,
        }
    }

    pub fn with_start_clock(mut self, clock: ClockTime) -> Self {
        self.start_clock = Some(clock);
        self
    }

    /// Wall-clock label of the start of a 0-based interval. Defaults to 10:00
    /// when the grid carries no anchor.
    pub fn clock_at(&self, interval: usize) -> ClockTime {
        self.start_clock
            .unwrap_or(ClockTime(600))
            .plus_minutes(interval as u32 * self.interval_minutes)
    }
}

/// Converts a duration to grid intervals, rounding up so that regulation
/// minima and travel times are never undercut.
pub fn minutes_to_intervals(minutes: u32, grid: &TimeGrid) -> u32 {
    minutes.div_ceil(grid.interval_minutes.max(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// The four node partitions of the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    Start,
    Water,
    Wildfire,
    Base,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    StartPosition,
    WaterPoint {
        capacity_liters: f64,
        simultaneous: u32,
    },
    Wildfire {
        efficiency: Vec<f64>,
    },
    RestBase {
        capacity: u32,
    },
}

impl NodeKind {
    pub fn partition(&self) -> Partition {
        match self {
            NodeKind::StartPosition => Partition::Start,
            NodeKind::WaterPoint { .. } => Partition::Water,
            NodeKind::Wildfire { .. } => Partition::Wildfire,
            NodeKind::RestBase { .. } => Partition::Base,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub position: Option<Point>,
}

impl Node {
    pub fn start(id: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            kind: NodeKind::StartPosition,
            position: None,
        }
    }

    pub fn water(id: impl Into<String>, capacity_liters: f64, simultaneous: u32) -> Self {
        Self {
            id: id.into(),
            kind: NodeKind::WaterPoint {
                capacity_liters,
                simultaneous,
            },
            position: None,
        }
    }

    pub fn wildfire(id: impl Into<String>, efficiency: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            kind: NodeKind::Wildfire { efficiency },
            position: None,
        }
    }

    pub fn base(id: impl Into<String>, capacity: u32) -> Self {
        Self {
            id: id.into(),
            kind: NodeKind::RestBase { capacity },
            position: None,
        }
    }

    pub fn at(mut self, x: f64, y: f64) -> Self {
        self.position = Some(Point { x, y });
        self
    }

    pub fn partition(&self) -> Partition {
        self.kind.partition()
    }

    /// Efficiency per interval of a wildfire node.
    pub fn efficiency(&self) -> Option<&Vec<f64>> {
        match &self.kind {
            NodeKind::Wildfire { efficiency } => Some(efficiency),
            _ => None,
        }
    }

    pub fn efficiency_mut(&mut self) -> Option<&mut Vec<f64>> {
        match &mut self.kind {
            NodeKind::Wildfire { efficiency } => Some(efficiency),
            _ => None,
        }
    }
}

/// A directed arc of the graph; the flight time depends on the helicopter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeIdx,
    pub to: NodeIdx,
    /// Intervals needed by each helicopter, indexed by [`HeliIdx`].
    pub flight_time: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Helicopter {
    pub id: String,
    pub start: NodeIdx,
    pub water_capacity: f64,
    pub initially_loaded: bool,
    /// Consecutive flight intervals already accumulated when planning starts.
    pub consecutive_flight: u32,
    /// Flight intervals already flown today.
    pub total_flight: u32,
    pub max_consecutive_flight: u32,
    pub max_total_flight: u32,
    /// Consecutive rest intervals already accumulated when planning starts.
    pub consecutive_rest: u32,
    pub min_rest: u32,
    pub trajectory: TrajIdx,
    /// Load or drop duration at each node, indexed by [`NodeIdx`].
    pub service_time: Vec<u32>,
}

/// Lookup tables derived from the raw instance data.
#[derive(Debug, Clone, Default)]
struct InstanceIndex {
    starts: Vec<NodeIdx>,
    waters: Vec<NodeIdx>,
    fires: Vec<NodeIdx>,
    bases: Vec<NodeIdx>,
    /// Position of each node within its own partition.
    rank: Vec<usize>,
    edge_lookup: Vec<Option<EdgeIdx>>,
    out_edges: Vec<Vec<EdgeIdx>>,
    in_edges: Vec<Vec<EdgeIdx>>,
    members: Vec<Vec<HeliIdx>>,
}

/// A complete planning problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub grid: TimeGrid,
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub helicopters: Vec<Helicopter>,
    pub trajectories: Vec<String>,
    /// `ev^t`: a declared wildfire evolution at each interval.
    pub evolution: Vec<bool>,
    pub weights: ObjectiveWeights,
    index: InstanceIndex,
}

impl Instance {
    /// Assembles an instance. Dangling references are tolerated here and
    /// reported by [`validate_instance`].
    pub fn new(
        grid: TimeGrid,
        nodes: Vec<Node>,
        edges: Vec<Edge>,
        helicopters: Vec<Helicopter>,
        trajectories: Vec<String>,
        evolution: Vec<bool>,
        weights: ObjectiveWeights,
    ) -> Self {
        let mut inst = Self {
            grid,
            nodes,
            edges,
            helicopters,
            trajectories,
            evolution,
            weights,
            index: InstanceIndex::default(),
        };
        inst.reindex();
        inst
    }

    /// Rebuilds lookup tables after the public fields were edited.
    pub fn reindex(&mut self) {
        let n = self.nodes.len();
        let mut idx = InstanceIndex {
            rank: vec![0; n],
            edge_lookup: vec![None; n * n],
            out_edges: vec![Vec::new(); n],
            in_edges: vec![Vec::new(); n],
            members: vec![Vec::new(); self.trajectories.len()],
            ..Default::default()
        };
        for (i, node) in self.nodes.iter().enumerate() {
            let list = match node.partition() {
                Partition::Start => &mut idx.starts,
                Partition::Water => &mut idx.waters,
                Partition::Wildfire => &mut idx.fires,
                Partition::Base => &mut idx.bases,
            };
            idx.rank[i] = list.len();
            list.push(NodeIdx(i));
        }
        for (e, edge) in self.edges.iter().enumerate() {
            let (f, t) = (edge.from.0, edge.to.0);
            if f < n && t < n {
                if idx.edge_lookup[f * n + t].is_none() {
                    idx.edge_lookup[f * n + t] = Some(EdgeIdx(e));
                }
                idx.out_edges[f].push(EdgeIdx(e));
                idx.in_edges[t].push(EdgeIdx(e));
            }
        }
        for (a, heli) in self.helicopters.iter().enumerate() {
            if let Some(list) = idx.members.get_mut(heli.trajectory.0) {
                list.push(HeliIdx(a));
            }
        }
        self.index = idx;
    }

    /// `|T|`.
    #[inline]
    pub fn horizon(&self) -> usize {
        self.grid.horizon_intervals
    }

    pub fn node(&self, i: NodeIdx) -> &Node {
        &self.nodes[i.0]
    }

    pub fn heli(&self, a: HeliIdx) -> &Helicopter {
        &self.helicopters[a.0]
    }

    pub fn edge(&self, e: EdgeIdx) -> &Edge {
        &self.edges[e.0]
    }

    pub fn partition(&self, i: NodeIdx) -> Partition {
        self.nodes[i.0].partition()
    }

    pub fn is_base(&self, i: NodeIdx) -> bool {
        self.partition(i) == Partition::Base
    }

    pub fn is_water(&self, i: NodeIdx) -> bool {
        self.partition(i) == Partition::Water
    }

    pub fn is_fire(&self, i: NodeIdx) -> bool {
        self.partition(i) == Partition::Wildfire
    }

    /// Water point or wildfire node: the places where helicopters hover.
    pub fn is_service(&self, i: NodeIdx) -> bool {
        matches!(self.partition(i), Partition::Water | Partition::Wildfire)
    }

    pub fn starts(&self) -> &[NodeIdx] {
        &self.index.starts
    }

    pub fn waters(&self) -> &[NodeIdx] {
        &self.index.waters
    }

    pub fn fires(&self) -> &[NodeIdx] {
        &self.index.fires
    }

    pub fn bases(&self) -> &[NodeIdx] {
        &self.index.bases
    }

    /// Position of a node within its own partition (1-based labels such as
    /// `C2` or `I3` are built from this).
    pub fn rank(&self, i: NodeIdx) -> usize {
        self.index.rank[i.0]
    }

    pub fn helicopter_ids(&self) -> impl Iterator<Item = HeliIdx> {
        (0..self.helicopters.len()).map(HeliIdx)
    }

    pub fn trajectory_ids(&self) -> impl Iterator<Item = TrajIdx> {
        (0..self.trajectories.len()).map(TrajIdx)
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeIdx> {
        (0..self.nodes.len()).map(NodeIdx)
    }

    pub fn members(&self, w: TrajIdx) -> &[HeliIdx] {
        self.index.members.get(w.0).map_or(&[], Vec::as_slice)
    }

    pub fn edge_between(&self, from: NodeIdx, to: NodeIdx) -> Option<EdgeIdx> {
        let n = self.nodes.len();
        if from.0 >= n || to.0 >= n {
            return None;
        }
        self.index.edge_lookup[from.0 * n + to.0]
    }

    pub fn out_edges(&self, i: NodeIdx) -> &[EdgeIdx] {
        &self.index.out_edges[i.0]
    }

    pub fn in_edges(&self, i: NodeIdx) -> &[EdgeIdx] {
        &self.index.in_edges[i.0]
    }

    /// `λ_ija`.
    pub fn flight_time(&self, e: EdgeIdx, a: HeliIdx) -> u32 {
        self.edges[e.0].flight_time.get(a.0).copied().unwrap_or(1)
    }

    /// Flight time between two nodes, if the arc exists.
    pub fn travel(&self, from: NodeIdx, to: NodeIdx, a: HeliIdx) -> Option<u32> {
        self.edge_between(from, to).map(|e| self.flight_time(e, a))
    }

    /// `α_ia`.
    pub fn service_time(&self, i: NodeIdx, a: HeliIdx) -> u32 {
        self.helicopters[a.0]
            .service_time
            .get(i.0)
            .copied()
            .unwrap_or(1)
            .max(1)
    }

    /// `ef_i^t` for a 0-based interval; zero for non-wildfire nodes.
    pub fn efficiency(&self, i: NodeIdx, t: usize) -> f64 {
        match &self.nodes[i.0].kind {
            NodeKind::Wildfire { efficiency } => efficiency.get(t).copied().unwrap_or(0.0),
            _ => 0.0,
        }
    }

    /// `ev^t` for a 0-based interval.
    pub fn evolves_at(&self, t: usize) -> bool {
        self.evolution.get(t).copied().unwrap_or(false)
    }

    /// First intervals (0-based) of the evolution epochs. Interval 0 always
    /// opens the first epoch.
    pub fn epoch_starts(&self) -> Vec<usize> {
        let mut starts = vec![0];
        starts.extend((1..self.horizon()).filter(|&t| self.evolves_at(t)));
        starts
    }

    /// Closeness of `to` seen from `from` for helicopter `a`: Euclidean
    /// distance when both nodes have coordinates, flight time otherwise.
    pub fn closeness(&self, from: NodeIdx, to: NodeIdx, a: HeliIdx) -> Option<f64> {
        match (self.nodes[from.0].position, self.nodes[to.0].position) {
            (Some(p), Some(q)) => Some(p.distance(&q)),
            _ => self.travel(from, to, a).map(f64::from),
        }
    }

    pub fn node_by_id(&self, id: &str) -> Option<NodeIdx> {
        self.nodes.iter().position(|n| n.id == id).map(NodeIdx)
    }

    pub fn heli_by_id(&self, id: &str) -> Option<HeliIdx> {
        self.helicopters.iter().position(|h| h.id == id).map(HeliIdx)
    }

    /// Short display label such as `P1`, `C2`, `I3`, `B1`.
    pub fn label(&self, i: NodeIdx) -> String {
        let prefix = match self.partition(i) {
            Partition::Start => "P",
            Partition::Water => "C",
            Partition::Wildfire => "I",
            Partition::Base => "B",
        };
        format!("{prefix}{}", self.rank(i) + 1)
    }
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.grid == other.grid
            && self.nodes == other.nodes
            && self.edges == other.edges
            && self.helicopters == other.helicopters
            && self.trajectories == other.trajectories
            && self.evolution == other.evolution
            && self.weights == other.weights
    }
}
