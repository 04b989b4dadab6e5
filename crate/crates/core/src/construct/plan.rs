use crate::model::{HeliIdx, Instance, NodeIdx, TrajIdx};
use crate::rng;
use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

/// Water point and wildfire node a trajectory works between.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EpochNodes {
    pub load: NodeIdx,
    pub drop: NodeIdx,
}

/// Node assignment per trajectory and evolution epoch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryPlan {
    /// First interval (0-based) of each epoch.
    pub epoch_starts: Vec<usize>,
    /// `nodes[w][k]`.
    pub nodes: Vec<Vec<EpochNodes>>,
    /// Epochs where no wildfire node had a positive efficiency.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl TrajectoryPlan {
    pub fn epochs(&self) -> usize {
        self.epoch_starts.len()
    }

    /// Epoch containing a 0-based interval.
    pub fn epoch_of(&self, t: usize) -> usize {
        self.epoch_starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    pub fn at(&self, w: TrajIdx, t: usize) -> EpochNodes {
        self.nodes[w.0][self.epoch_of(t)]
    }
}

/// One work period: leave at `start` (or as soon as allowed), alternate
/// loads at the trajectory's water point and drops at its wildfire node,
/// then rest at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shift {
    /// Earliest departure, 0-based. The actual departure also waits for the
    /// start stay and the minimum rest.
    pub start: usize,
    /// Upper bound on loads plus drops; `None` works until a budget runs
    /// out.
    pub stops: Option<u32>,
    /// Rest base; `None` picks the base closest to the current drop node.
    pub base: Option<NodeIdx>,
}

impl Shift {
    pub fn asap() -> Self {
        Self {
            start: 0,
            stops: None,
            base: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeliPlan {
    pub shifts: Vec<Shift>,
    /// Base used by a helicopter that never works.
    pub park: NodeIdx,
    /// Earliest departure towards `park`.
    pub park_departure: usize,
    /// Fly to `park` at `park_departure` and rest before the first shift.
    #[serde(default)]
    pub reposition: bool,
}

/// Everything the decoder needs to rebuild a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkPlan {
    pub trajectories: TrajectoryPlan,
    pub helicopters: Vec<HeliPlan>,
}

/// For each epoch and trajectory: the wildfire node with the highest
/// efficiency at the epoch's first interval, then the water point closest to
/// it. Ties are broken at random. A trajectory avoids repeating a
/// (drop, load) pair already taken by an earlier trajectory in the same
/// epoch when another water point is available.
pub fn plan_trajectories(instance: &Instance, seed: u64) -> TrajectoryPlan {
    let mut r = rng::from_seed(rng::sub_seed(seed, 1));
    let epoch_starts = instance.epoch_starts();
    let n_w = instance.trajectories.len();
    let mut nodes = vec![Vec::with_capacity(epoch_starts.len()); n_w];
    let mut diagnostics = Vec::new();
    for (k, &t) in epoch_starts.iter().enumerate() {
        let fires = instance.fires();
        let best = fires.iter().map(|&i| instance.efficiency(i, t)).fold(f64::NEG_INFINITY, f64::max);
        if best <= 0.0 {
            diagnostics.push(format!("epoch {} starting at interval {} has no positive efficiency", k + 1, t + 1));
        }
        let tied: Vec<NodeIdx> = fires.iter().copied().filter(|&i| instance.efficiency(i, t) == best).collect();
        let mut taken: Vec<EpochNodes> = Vec::new();
        for (w, out) in nodes.iter_mut().enumerate() {
            let probe = instance.members(TrajIdx(w)).first().copied().unwrap_or(HeliIdx(0));
            let drop = *tied.choose(&mut r).expect("instance has wildfire nodes");
            let ranked = closest_first(instance, drop, instance.waters(), probe, &mut r);
            let load = ranked
                .iter()
                .copied()
                .find(|&c| !taken.contains(&EpochNodes { load: c, drop }))
                .unwrap_or(ranked[0]);
            let pick = EpochNodes { load, drop };
            taken.push(pick);
            out.push(pick);
        }
    }
    TrajectoryPlan {
        epoch_starts,
        nodes,
        diagnostics,
    }
}

/// Candidates ordered by closeness to `from` for helicopter `a`, unreachable
/// ones last; equal distances are shuffled.
pub fn closest_first(instance: &Instance, from: NodeIdx, candidates: &[NodeIdx], a: HeliIdx, r: &mut rng::Rng) -> Vec<NodeIdx> {
    use rand::seq::SliceRandom;
    let mut list: Vec<NodeIdx> = candidates.to_vec();
    list.shuffle(r);
    list.sort_by(|&x, &y| {
        let dx = instance.closeness(from, x, a).unwrap_or(f64::INFINITY);
        let dy = instance.closeness(from, y, a).unwrap_or(f64::INFINITY);
        dx.total_cmp(&dy)
    });
    list
}

/// The candidate closest to `from`, lowest index on ties.
pub fn closest(instance: &Instance, from: NodeIdx, candidates: &[NodeIdx], a: HeliIdx) -> Option<NodeIdx> {
    candidates.iter().copied().min_by(|&x, &y| {
        let dx = instance.closeness(from, x, a).unwrap_or(f64::INFINITY);
        let dy = instance.closeness(from, y, a).unwrap_or(f64::INFINITY);
        dx.total_cmp(&dy).then(x.cmp(&y))
    })
}
