//! Neighbourhood moves and the two improvement drivers.

mod ils;
mod moves;
mod sa;
mod trace;

pub use ils::{iterated_local_search, iterated_local_search_observed, IlsParams};
pub use moves::{applicable, apply_move, neighbour, random_move, Move, MoveKind};
pub use sa::{acceptance_probability, accepts, simulated_annealing, simulated_annealing_observed, SaParams};
pub use trace::{Budget, CheckpointRecord, RunTrace, StopReason};

use crate::construct::Solution;

#[derive(Debug, Clone)]
pub struct RunResult {
    pub best: Solution,
    pub trace: RunTrace,
}
