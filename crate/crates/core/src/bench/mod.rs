//! Instance families, summaries, the exhaustive solver for tiny instances,
//! the comparison harness and schedule rendering.

mod brute;
mod comparison;
mod family;
pub mod fixture;
mod fuzz;
mod generate;
mod render;
mod summary;

pub use brute::{brute_force_optimum, BruteForce};
pub use family::{Family, FamilySpec, FireType, RegulationOverride};
pub use generate::{generate_instance, generate_with};
pub use fuzz::random_schedule;
pub use fixture::{b12_fixture, fixture_windows, B12Fixture, PUBLISHED_DROPS, PUBLISHED_WINDOWS};
pub use render::{glyph, render_schedule, render_svg, render_windows, work_windows, WorkWindow};
pub use summary::{drops_per_helicopter, summarize, summarize_with, SummaryRow};
pub use comparison::{
    read_external_csv, run_algorithm, run_algorithm_observed, run_comparison, Algorithm, Cell, ComparisonReport, ComparisonRequest, ExternalResult,
    RunRecord,
};
