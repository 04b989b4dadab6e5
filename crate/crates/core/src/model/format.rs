//! JSON documents for instances and schedules.
//!
//! The normative description lives in `docs/instance-format.md`. Durations are
//! intervals unless the owning record carries `"unit": "min"`, in which case
//! they are converted with [`minutes_to_intervals`](super::minutes_to_intervals).

use super::{
    minutes_to_intervals, Activity, ClockTime, Edge, EdgeIdx, Helicopter, Instance, Node, NodeIdx, NodeKind,
    Point, Schedule, TimeGrid, TrajIdx,
};
use crate::objective::ObjectiveWeights;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    #[serde(alias = "intervals")]
    Interval,
    Min,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub interval_minutes: u32,
    pub horizon_intervals: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_clock: Option<ClockTime>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDoc {
    Start {
        id: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        position: Option<Point>,
    },
    Water {
        id: String,
        capacity: f64,
        simultaneous: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        position: Option<Point>,
    },
    Wildfire {
        id: String,
        efficiency: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        position: Option<Point>,
    },
    Base {
        id: String,
        capacity: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        position: Option<Point>,
    },
}

/// A single value for every helicopter (or node), or a map keyed by id with
/// an optional `default` entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerId {
    Uniform(u32),
    ById(BTreeMap<String, u32>),
}

impl PerId {
    fn resolve(&self, key: &str) -> Option<u32> {
        match self {
            PerId::Uniform(v) => Some(*v),
            PerId::ById(map) => map.get(key).or_else(|| map.get("default")).copied(),
        }
    }

    fn compress(values: &[(String, u32)]) -> Self {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for (_, v) in values {
            *counts.entry(*v).or_default() += 1;
        }
        if counts.len() <= 1 {
            return PerId::Uniform(counts.keys().next().copied().unwrap_or(1));
        }
        let mode = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(v, _)| *v)
            .unwrap_or(1);
        let mut map = BTreeMap::new();
        map.insert("default".to_string(), mode);
        for (k, v) in values {
            if *v != mode {
                map.insert(k.clone(), *v);
            }
        }
        PerId::ById(map)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub from: String,
    pub to: String,
    pub flight_time: PerId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Unit>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelicopterDoc {
    pub id: String,
    pub start: String,
    pub water_capacity: f64,
    #[serde(default)]
    pub initially_loaded: bool,
    #[serde(default)]
    pub consecutive_flight: u32,
    #[serde(default)]
    pub total_flight: u32,
    pub max_consecutive_flight: u32,
    pub max_total_flight: u32,
    #[serde(default)]
    pub consecutive_rest: u32,
    pub min_rest: u32,
    pub trajectory: String,
    pub load_drop_time: PerId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Unit>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Flag {
    Bool(bool),
    Int(u8),
}

impl Flag {
    fn get(self) -> bool {
        match self {
            Flag::Bool(b) => b,
            Flag::Int(v) => v != 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub grid: GridDoc,
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
    pub helicopters: Vec<HelicopterDoc>,
    pub trajectories: Vec<String>,
    pub evolution: Vec<Flag>,
    #[serde(default)]
    pub weights: ObjectiveWeights,
}

fn fmt_err(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

impl InstanceDoc {
    pub fn into_instance(self) -> Result<Instance> {
        let grid = TimeGrid {
            interval_minutes: self.grid.interval_minutes,
            horizon_intervals: self.grid.horizon_intervals,
            start_clock: self.grid.start_clock,
        };
        let nodes: Vec<Node> = self
            .nodes
            .into_iter()
            .map(|n| match n {
                NodeDoc::Start { id, position } => Node {
                    id,
                    kind: NodeKind::StartPosition,
                    position,
                },
                NodeDoc::Water {
                    id,
                    capacity,
                    simultaneous,
                    position,
                } => Node {
                    id,
                    kind: NodeKind::WaterPoint {
                        capacity_liters: capacity,
                        simultaneous,
                    },
                    position,
                },
                NodeDoc::Wildfire { id, efficiency, position } => Node {
                    id,
                    kind: NodeKind::Wildfire { efficiency },
                    position,
                },
                NodeDoc::Base { id, capacity, position } => Node {
                    id,
                    kind: NodeKind::RestBase { capacity },
                    position,
                },
            })
            .collect();
        let node_ix: HashMap<&str, NodeIdx> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.id.as_str(), NodeIdx(i)))
            .collect();
        let traj_ix: HashMap<&str, TrajIdx> = self
            .trajectories
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_str(), TrajIdx(i)))
            .collect();
        let node_ref = |id: &str, ctx: &str| {
            node_ix
                .get(id)
                .copied()
                .ok_or_else(|| fmt_err(format!("{ctx}: unknown node `{id}`")))
        };
        let conv = |v: u32, unit: Option<Unit>| match unit {
            Some(Unit::Min) => minutes_to_intervals(v, &grid),
            _ => v,
        };

        let mut helicopters = Vec::with_capacity(self.helicopters.len());
        for h in &self.helicopters {
            let ctx = format!("helicopter `{}`", h.id);
            let start = node_ref(&h.start, &ctx)?;
            let trajectory = *traj_ix
                .get(h.trajectory.as_str())
                .ok_or_else(|| fmt_err(format!("{ctx}: unknown trajectory `{}`", h.trajectory)))?;
            if let PerId::ById(map) = &h.load_drop_time {
                for key in map.keys() {
                    if key != "default" && !node_ix.contains_key(key.as_str()) {
                        return Err(fmt_err(format!("{ctx}: load_drop_time names unknown node `{key}`")));
                    }
                }
            }
            let service_time = nodes
                .iter()
                .map(|n| {
                    h.load_drop_time
                        .resolve(&n.id)
                        .map(|v| conv(v, h.unit))
                        .ok_or_else(|| fmt_err(format!("{ctx}: no load_drop_time for node `{}`", n.id)))
                })
                .collect::<Result<Vec<_>>>()?;
            helicopters.push(Helicopter {
                id: h.id.clone(),
                start,
                water_capacity: h.water_capacity,
                initially_loaded: h.initially_loaded,
                consecutive_flight: conv(h.consecutive_flight, h.unit),
                total_flight: conv(h.total_flight, h.unit),
                max_consecutive_flight: conv(h.max_consecutive_flight, h.unit),
                max_total_flight: conv(h.max_total_flight, h.unit),
                consecutive_rest: conv(h.consecutive_rest, h.unit),
                min_rest: conv(h.min_rest, h.unit),
                trajectory,
                service_time,
            });
        }

        let mut edges = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let ctx = format!("edge {}->{}", e.from, e.to);
            let from = node_ref(&e.from, &ctx)?;
            let to = node_ref(&e.to, &ctx)?;
            if let PerId::ById(map) = &e.flight_time {
                for key in map.keys() {
                    if key != "default" && !helicopters.iter().any(|h| &h.id == key) {
                        return Err(fmt_err(format!("{ctx}: flight_time names unknown helicopter `{key}`")));
                    }
                }
            }
            let flight_time = helicopters
                .iter()
                .map(|h| {
                    e.flight_time
                        .resolve(&h.id)
                        .map(|v| conv(v, e.unit))
                        .ok_or_else(|| fmt_err(format!("{ctx}: no flight_time for helicopter `{}`", h.id)))
                })
                .collect::<Result<Vec<_>>>()?;
            edges.push(Edge { from, to, flight_time });
        }

        Ok(Instance::new(
            grid,
            nodes,
            edges,
            helicopters,
            self.trajectories,
            self.evolution.into_iter().map(Flag::get).collect(),
            self.weights,
        ))
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let nodes = inst
            .nodes
            .iter()
            .map(|n| {
                let id = n.id.clone();
                let position = n.position;
                match &n.kind {
                    NodeKind::StartPosition => NodeDoc::Start { id, position },
                    NodeKind::WaterPoint {
                        capacity_liters,
                        simultaneous,
                    } => NodeDoc::Water {
                        id,
                        capacity: *capacity_liters,
                        simultaneous: *simultaneous,
                        position,
                    },
                    NodeKind::Wildfire { efficiency } => NodeDoc::Wildfire {
                        id,
                        efficiency: efficiency.clone(),
                        position,
                    },
                    NodeKind::RestBase { capacity } => NodeDoc::Base {
                        id,
                        capacity: *capacity,
                        position,
                    },
                }
            })
            .collect();
        let edges = inst
            .edges
            .iter()
            .map(|e| {
                let values: Vec<(String, u32)> = inst
                    .helicopters
                    .iter()
                    .zip(&e.flight_time)
                    .map(|(h, &v)| (h.id.clone(), v))
                    .collect();
                EdgeDoc {
                    from: inst.nodes[e.from.0].id.clone(),
                    to: inst.nodes[e.to.0].id.clone(),
                    flight_time: PerId::compress(&values),
                    unit: None,
                }
            })
            .collect();
        let helicopters = inst
            .helicopters
            .iter()
            .map(|h| {
                let values: Vec<(String, u32)> = inst
                    .nodes
                    .iter()
                    .zip(&h.service_time)
                    .map(|(n, &v)| (n.id.clone(), v))
                    .collect();
                HelicopterDoc {
                    id: h.id.clone(),
                    start: inst.nodes[h.start.0].id.clone(),
                    water_capacity: h.water_capacity,
                    initially_loaded: h.initially_loaded,
                    consecutive_flight: h.consecutive_flight,
                    total_flight: h.total_flight,
                    max_consecutive_flight: h.max_consecutive_flight,
                    max_total_flight: h.max_total_flight,
                    consecutive_rest: h.consecutive_rest,
                    min_rest: h.min_rest,
                    trajectory: inst.trajectories[h.trajectory.0].clone(),
                    load_drop_time: PerId::compress(&values),
                    unit: None,
                }
            })
            .collect();
        InstanceDoc {
            grid: GridDoc {
                interval_minutes: inst.grid.interval_minutes,
                horizon_intervals: inst.grid.horizon_intervals,
                start_clock: inst.grid.start_clock,
            },
            nodes,
            edges,
            helicopters,
            trajectories: inst.trajectories.clone(),
            evolution: inst.evolution.iter().map(|&b| Flag::Int(b as u8)).collect(),
            weights: inst.weights.clone(),
        }
    }
}

/// Parses an instance document without validating it.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
    doc.into_instance()
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceDoc::from_instance(inst)).expect("instance serializes");
    text.push('\n');
    text
}

/// Compact serialization used for content hashing.
pub fn instance_to_canonical_json(inst: &Instance) -> String {
    serde_json::to_string(&InstanceDoc::from_instance(inst)).expect("instance serializes")
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActivityDoc {
    At(String),
    Fly {
        from: String,
        to: String,
        #[serde(default)]
        step: u32,
    },
    Unplaced,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDoc {
    pub helicopters: Vec<String>,
    pub timeline: Vec<Vec<ActivityDoc>>,
}

impl ScheduleDoc {
    pub fn from_schedule(inst: &Instance, schedule: &Schedule) -> Self {
        let timeline = schedule
            .timelines
            .iter()
            .map(|line| {
                let mut step = 0;
                let mut prev: Option<EdgeIdx> = None;
                line.iter()
                    .map(|act| match *act {
                        Activity::At(i) => {
                            prev = None;
                            ActivityDoc::At(inst.nodes[i.0].id.clone())
                        }
                        Activity::Fly(e) => {
                            step = if prev == Some(e) { step + 1 } else { 1 };
                            prev = Some(e);
                            let edge = inst.edge(e);
                            ActivityDoc::Fly {
                                from: inst.nodes[edge.from.0].id.clone(),
                                to: inst.nodes[edge.to.0].id.clone(),
                                step,
                            }
                        }
                        Activity::Unplaced => {
                            prev = None;
                            ActivityDoc::Unplaced
                        }
                    })
                    .collect()
            })
            .collect();
        ScheduleDoc {
            helicopters: inst.helicopters.iter().map(|h| h.id.clone()).collect(),
            timeline,
        }
    }

    /// Resolves ids against the instance. Timelines are reordered to match the
    /// instance's helicopter order.
    pub fn into_schedule(self, inst: &Instance) -> Result<Schedule> {
        if self.helicopters.len() != self.timeline.len() {
            return Err(fmt_err("helicopters and timeline have different lengths"));
        }
        let mut timelines: Vec<Option<Vec<Activity>>> = vec![None; inst.helicopters.len()];
        for (id, line) in self.helicopters.iter().zip(self.timeline) {
            let a = inst
                .heli_by_id(id)
                .ok_or_else(|| fmt_err(format!("unknown helicopter `{id}`")))?;
            let acts = line
                .into_iter()
                .map(|doc| match doc {
                    ActivityDoc::At(id) => inst
                        .node_by_id(&id)
                        .map(Activity::At)
                        .ok_or_else(|| fmt_err(format!("unknown node `{id}`"))),
                    ActivityDoc::Fly { from, to, .. } => {
                        let f = inst.node_by_id(&from);
                        let t = inst.node_by_id(&to);
                        f.zip(t)
                            .and_then(|(f, t)| inst.edge_between(f, t))
                            .map(Activity::Fly)
                            .ok_or_else(|| fmt_err(format!("unknown edge {from}->{to}")))
                    }
                    ActivityDoc::Unplaced => Ok(Activity::Unplaced),
                })
                .collect::<Result<Vec<_>>>()?;
            if timelines[a.0].replace(acts).is_some() {
                return Err(fmt_err(format!("helicopter `{id}` listed twice")));
            }
        }
        let timelines = timelines
            .into_iter()
            .enumerate()
            .map(|(a, l)| l.ok_or_else(|| fmt_err(format!("missing timeline for `{}`", inst.helicopters[a].id))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Schedule::new(timelines))
    }
}

pub fn schedule_to_json(inst: &Instance, schedule: &Schedule) -> String {
    let mut text =
        serde_json::to_string(&ScheduleDoc::from_schedule(inst, schedule)).expect("schedule serializes");
    text.push('\n');
    text
}

pub fn schedule_from_json(inst: &Instance, text: &str) -> Result<Schedule> {
    let doc: ScheduleDoc = serde_json::from_str(text).map_err(|e| fmt_err(e.to_string()))?;
    doc.into_schedule(inst)
}

pub fn load_schedule(inst: &Instance, path: impl AsRef<Path>) -> Result<Schedule> {
    schedule_from_json(inst, &std::fs::read_to_string(path)?)
}
