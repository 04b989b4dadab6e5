//! Planning engine for firefighting helicopter fleets.
//!
//! The crate models a wildfire response as a graph of start positions, water
//! points, wildfire nodes and rest bases over a discrete time grid, and
//! provides:
//!
//! - [`feasibility::check_schedule`], a direct evaluator of every model
//!   constraint that reports violations row by row,
//! - [`milp`], the full mixed-integer model with an LP-format writer and an
//!   assignment checker that acts as a second, independent oracle,
//! - [`construct`] and [`improve`], a greedy builder with repair moves and two
//!   improvement drivers (simulated annealing and iterated local search),
//! - [`bench`], instance families, summaries, an exhaustive solver for tiny
//!   instances and Gantt rendering,
//! - [`service`], an HTTP planning service.
//!
//! ```
//! use heliplan::{bench, construct, feasibility, objective};
//!
//! let spec = bench::FamilySpec::small(1);
//! let instance = bench::generate_instance(&spec);
//! let schedule = construct::initial_solution(&instance, 7).unwrap().schedule;
//! assert!(feasibility::check_schedule(&instance, &schedule).unwrap().is_empty());
//! let value = objective::evaluate(&instance, &schedule).unwrap();
//! assert!(value.terms.efficiency_raw >= 0.0);
//! ```

pub mod bench;
pub mod config;
pub mod construct;
pub mod error;
pub mod feasibility;
pub mod improve;
pub mod milp;
pub mod model;
pub mod objective;
pub mod rng;
pub mod service;

pub use error::{Error, Result};
pub use model::{Activity, Instance, Schedule};
