use crate::feasibility::ledger::blank_slack;
use crate::feasibility::Derived;
use crate::model::{Activity, Instance, Schedule, StructureError};
use serde::{Deserialize, Serialize};

/// Headline counts of a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SummaryRow {
    pub drops: u32,
    pub flights: u32,
    pub trajectory_changes: u32,
    /// Interior intervals where nobody flies, loads or drops.
    pub blank_times: u32,
}

pub fn summarize(instance: &Instance, schedule: &Schedule) -> Result<SummaryRow, StructureError> {
    let derived = Derived::new(instance, schedule)?;
    Ok(summarize_with(instance, schedule, &derived))
}

pub fn summarize_with(instance: &Instance, schedule: &Schedule, derived: &Derived) -> SummaryRow {
    let flights = schedule
        .timelines
        .iter()
        .flatten()
        .filter(|a| matches!(a, Activity::Fly(_)))
        .count();
    SummaryRow {
        drops: drops_per_helicopter(derived).iter().sum(),
        flights: flights as u32,
        trajectory_changes: derived.trajectories.changes() as u32,
        blank_times: blank_slack(instance, schedule).iter().filter(|&&b| b > 0.0).count() as u32,
    }
}

/// Completed drops (`ed` events) of each helicopter.
pub fn drops_per_helicopter(derived: &Derived) -> Vec<u32> {
    derived
        .events
        .drop_end
        .iter()
        .map(|line| line.iter().filter(|e| e.is_some()).count() as u32)
        .collect()
}
