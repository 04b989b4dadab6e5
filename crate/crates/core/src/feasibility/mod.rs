//! Direct evaluation of the model constraints on a concrete schedule.

mod check;
pub mod ledger;
mod report;

pub use check::{check_schedule, check_with};
pub use ledger::{
    build_flight_ledger, build_trajectory_ledger, build_water_ledger, derive_events, Derived, Events, FlightLedger,
    TrajectoryLedger, WaterLedger,
};
pub use report::{ConstraintRef, RowIndex, RowKey, Violation, ViolationReport};

use crate::model::{Instance, Schedule};

/// True when the schedule is structurally valid and violates no row.
pub fn is_feasible(instance: &Instance, schedule: &Schedule) -> bool {
    check_schedule(instance, schedule).is_ok_and(|r| r.is_empty())
}
