use super::{EdgeIdx, HeliIdx, Instance, NodeIdx};
use thiserror::Error;

/// What a helicopter does during one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Activity {
    At(NodeIdx),
    Fly(EdgeIdx),
    /// Transient state used while a timeline is being rebuilt.
    Unplaced,
}

impl Activity {
    pub fn node(self) -> Option<NodeIdx> {
        match self {
            Activity::At(i) => Some(i),
            _ => None,
        }
    }

    pub fn edge(self) -> Option<EdgeIdx> {
        match self {
            Activity::Fly(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("helicopter {helicopter}, interval {interval}: {reason}")]
pub struct StructureError {
    /// 0-based helicopter index.
    pub helicopter: usize,
    /// 1-based interval.
    pub interval: usize,
    pub reason: String,
}

/// One timeline of `|T|` activities per helicopter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    pub timelines: Vec<Vec<Activity>>,
}

impl Schedule {
    pub fn new(timelines: Vec<Vec<Activity>>) -> Self {
        Self { timelines }
    }

    /// Every helicopter waits at its start position for the whole horizon.
    pub fn parked(instance: &Instance) -> Self {
        let timelines = instance
            .helicopters
            .iter()
            .map(|h| vec![Activity::At(h.start); instance.horizon()])
            .collect();
        Self { timelines }
    }

    #[inline]
    pub fn get(&self, a: HeliIdx, t: usize) -> Activity {
        self.timelines[a.0][t]
    }

    #[inline]
    pub fn at(&self, a: HeliIdx, t: usize) -> Option<NodeIdx> {
        self.timelines[a.0][t].node()
    }

    pub fn timeline(&self, a: HeliIdx) -> &[Activity] {
        &self.timelines[a.0]
    }

    /// Flying, or hovering at a water point or wildfire node.
    pub fn is_active(&self, instance: &Instance, a: HeliIdx, t: usize) -> bool {
        match self.timelines[a.0][t] {
            Activity::Fly(_) => true,
            Activity::At(i) => instance.is_service(i),
            Activity::Unplaced => false,
        }
    }

    /// Checks that every timeline is a coherent walk on the graph: it starts
    /// at a node, flights leave from the node occupied just before, landings
    /// happen at the edge's head, and nobody teleports between nodes.
    ///
    /// Flight durations and stay lengths are constraint matters and are left
    /// to the feasibility checker.
    pub fn check_structure(&self, instance: &Instance) -> Result<(), StructureError> {
        let fail = |a: usize, t: usize, reason: String| StructureError {
            helicopter: a,
            interval: t + 1,
            reason,
        };
        if self.timelines.len() != instance.helicopters.len() {
            return Err(fail(
                self.timelines.len().min(instance.helicopters.len()),
                0,
                format!(
                    "schedule has {} timelines for {} helicopters",
                    self.timelines.len(),
                    instance.helicopters.len()
                ),
            ));
        }
        let n_nodes = instance.nodes.len();
        let n_edges = instance.edges.len();
        for (a, line) in self.timelines.iter().enumerate() {
            if line.len() != instance.horizon() {
                return Err(fail(
                    a,
                    0,
                    format!("timeline has {} intervals, expected {}", line.len(), instance.horizon()),
                ));
            }
            for (t, act) in line.iter().enumerate() {
                match *act {
                    Activity::Unplaced => return Err(fail(a, t, "unplaced".into())),
                    Activity::At(i) if i.0 >= n_nodes => {
                        return Err(fail(a, t, format!("unknown node index {}", i.0)))
                    }
                    Activity::Fly(e) if e.0 >= n_edges => {
                        return Err(fail(a, t, format!("unknown edge index {}", e.0)))
                    }
                    _ => {}
                }
            }
            if let Activity::Fly(_) = line[0] {
                return Err(fail(a, 0, "first interval must be spent at a node".into()));
            }
            for t in 1..line.len() {
                match (line[t - 1], line[t]) {
                    (Activity::At(i), Activity::At(j)) if i != j => {
                        return Err(fail(
                            a,
                            t,
                            format!(
                                "jumps from {} to {} without flying",
                                instance.node(i).id,
                                instance.node(j).id
                            ),
                        ))
                    }
                    (Activity::At(i), Activity::Fly(e)) if instance.edge(e).from != i => {
                        return Err(fail(
                            a,
                            t,
                            format!("takes off on an edge that does not leave {}", instance.node(i).id),
                        ))
                    }
                    (Activity::Fly(e), Activity::Fly(f)) if e != f => {
                        return Err(fail(a, t, "switches edge in mid-flight".into()))
                    }
                    (Activity::Fly(e), Activity::At(j)) if instance.edge(e).to != j => {
                        return Err(fail(
                            a,
                            t,
                            format!("lands at {} instead of the edge head", instance.node(j).id),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Maximal runs of identical activity in one timeline, as
    /// `(activity, first, last)` with 0-based inclusive bounds.
    pub fn runs(&self, a: HeliIdx) -> Vec<(Activity, usize, usize)> {
        let line = &self.timelines[a.0];
        let mut out: Vec<(Activity, usize, usize)> = Vec::new();
        for (t, &act) in line.iter().enumerate() {
            match out.last_mut() {
                Some((prev, _, last)) if *prev == act => *last = t,
                _ => out.push((act, t, t)),
            }
        }
        out
    }
}
