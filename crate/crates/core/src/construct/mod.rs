//! Initial solutions: a trajectory plan, a greedy work plan, a decoder that
//! turns the plan into a schedule, and a repair loop.

mod decode;
mod greedy;
mod plan;
mod repair;

pub use decode::{decode, Decoded, ShiftOutcome};
pub use greedy::{assign_work, park_for, prune};
pub use plan::{closest, closest_first, plan_trajectories, EpochNodes, HeliPlan, Shift, TrajectoryPlan, WorkPlan};
pub use repair::{repair, Fix};

use crate::config::Config;
use crate::model::{Instance, Schedule};
use crate::objective::{evaluate, ObjectiveValue};
use crate::Result;

/// A feasible plan with its schedule and score.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub plan: WorkPlan,
    pub schedule: Schedule,
    pub outcomes: Vec<Vec<ShiftOutcome>>,
    pub value: ObjectiveValue,
    /// Repair steps spent on the way.
    pub repairs: usize,
}

impl Solution {
    /// Decodes a plan that is already known to be feasible.
    pub fn from_decoded(instance: &Instance, plan: WorkPlan, decoded: Decoded, repairs: usize) -> Result<Self> {
        let value = evaluate(instance, &decoded.schedule)?;
        Ok(Self {
            plan,
            schedule: decoded.schedule,
            outcomes: decoded.outcomes,
            value,
            repairs,
        })
    }
}

/// Greedy construction followed by repair, with the default settings.
pub fn initial_solution(instance: &Instance, seed: u64) -> Result<Solution> {
    initial_solution_with(instance, seed, &Config::default())
}

pub fn initial_solution_with(instance: &Instance, seed: u64, config: &Config) -> Result<Solution> {
    crate::model::ensure_valid(instance)?;
    let trajectories = plan_trajectories(instance, seed);
    let mut plan = assign_work(instance, trajectories)?;
    let (decoded, repairs) = repair(instance, &mut plan, config.moves.repair_attempts, seed)?;
    Solution::from_decoded(instance, plan, decoded, repairs)
}
