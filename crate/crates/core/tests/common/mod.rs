//! Hand-built instances and a compact timeline notation shared by the
//! integration tests.
#![allow(dead_code)]

use heliplan::model::{
    Activity, Edge, Helicopter, Instance, Node, NodeIdx, Partition, Schedule, TimeGrid, TrajIdx,
};
use heliplan::objective::ObjectiveWeights;

/// A small complete-graph instance. Node ids are `P1..` (one start per
/// helicopter), `C1..`, `I1..` and `B1..`.
#[derive(Debug, Clone)]
pub struct Toy {
    pub horizon: usize,
    pub helis: usize,
    /// Trajectory of each helicopter; all in `w1` unless set.
    pub traj_of: Vec<usize>,
    /// `(capacity, simultaneous)` per water point.
    pub waters: Vec<(f64, u32)>,
    /// Efficiency row per wildfire node.
    pub fires: Vec<Vec<f64>>,
    pub bases: Vec<u32>,
    pub travel: u32,
    pub alpha: u32,
    pub mcf: u32,
    pub mr: u32,
    pub mtf: u32,
    pub wc: f64,
    pub cfi: u32,
    /// Rest already accumulated; defaults to `mr`.
    pub ri: Option<u32>,
    /// 0-based intervals with a declared evolution.
    pub evolution: Vec<usize>,
}

impl Toy {
    pub fn new(helis: usize, horizon: usize) -> Self {
        Self {
            horizon,
            helis,
            traj_of: vec![0; helis],
            waters: vec![(1e6, helis as u32)],
            fires: vec![vec![10.0; horizon]],
            bases: vec![helis as u32],
            travel: 1,
            alpha: 1,
            mcf: 24,
            mr: 8,
            mtf: horizon as u32,
            wc: 1000.0,
            cfi: 0,
            ri: None,
            evolution: Vec::new(),
        }
    }

    pub fn build(&self) -> Instance {
        let mut nodes: Vec<Node> = (1..=self.helis).map(|a| Node::start(format!("P{a}"))).collect();
        for (k, &(cap, sim)) in self.waters.iter().enumerate() {
            nodes.push(Node::water(format!("C{}", k + 1), cap, sim));
        }
        for (k, ef) in self.fires.iter().enumerate() {
            nodes.push(Node::wildfire(format!("I{}", k + 1), ef.clone()));
        }
        for (k, &cap) in self.bases.iter().enumerate() {
            nodes.push(Node::base(format!("B{}", k + 1), cap));
        }
        let n = nodes.len();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && nodes[v].partition() != Partition::Start {
                    edges.push(Edge {
                        from: NodeIdx(u),
                        to: NodeIdx(v),
                        flight_time: vec![self.travel; self.helis],
                    });
                }
            }
        }
        let helicopters = (0..self.helis)
            .map(|a| Helicopter {
                id: format!("h{}", a + 1),
                start: NodeIdx(a),
                water_capacity: self.wc,
                initially_loaded: false,
                consecutive_flight: self.cfi,
                total_flight: 0,
                max_consecutive_flight: self.mcf,
                max_total_flight: self.mtf,
                consecutive_rest: self.ri.unwrap_or(self.mr),
                min_rest: self.mr,
                trajectory: TrajIdx(self.traj_of[a]),
                service_time: vec![self.alpha; n],
            })
            .collect();
        let n_traj = self.traj_of.iter().max().map_or(1, |m| m + 1);
        let mut evolution = vec![false; self.horizon];
        for &t in &self.evolution {
            evolution[t] = true;
        }
        Instance::new(
            TimeGrid::new(5, self.horizon),
            nodes,
            edges,
            helicopters,
            (1..=n_traj).map(|w| format!("w{w}")).collect(),
            evolution,
            ObjectiveWeights::default(),
        )
    }
}

/// Sets the flight time of `from -> to` for every helicopter.
pub fn set_travel(inst: &mut Instance, from: &str, to: &str, intervals: u32) {
    let (f, t) = (node(inst, from), node(inst, to));
    let e = inst.edge_between(f, t).expect("complete graph");
    let n = inst.helicopters.len();
    inst.edges[e.0].flight_time = vec![intervals; n];
}

pub fn node(inst: &Instance, id: &str) -> NodeIdx {
    inst.node_by_id(id).unwrap_or_else(|| panic!("no node `{id}`"))
}

/// Parses one timeline. Each token is one interval: `C1` stays at a node,
/// `>I1` flies from the current node towards `I1`. `tok*k` repeats a token.
pub fn line(inst: &Instance, text: &str) -> Vec<Activity> {
    let mut out = Vec::new();
    let mut here: Option<NodeIdx> = None;
    for tok in text.split_whitespace() {
        let (tok, reps) = match tok.split_once('*') {
            Some((t, k)) => (t, k.parse::<usize>().expect("repeat count")),
            None => (tok, 1),
        };
        for _ in 0..reps {
            if let Some(target) = tok.strip_prefix('>') {
                let to = node(inst, target);
                let from = here.expect("flight needs a known position");
                let e = inst
                    .edge_between(from, to)
                    .unwrap_or_else(|| panic!("no edge {}->{target}", inst.node(from).id));
                out.push(Activity::Fly(e));
            } else {
                let i = node(inst, tok);
                here = Some(i);
                out.push(Activity::At(i));
            }
        }
    }
    assert_eq!(out.len(), inst.horizon(), "timeline `{text}` has {} intervals", out.len());
    out
}

pub fn sched(inst: &Instance, lines: &[&str]) -> Schedule {
    Schedule::new(lines.iter().map(|l| line(inst, l)).collect())
}
