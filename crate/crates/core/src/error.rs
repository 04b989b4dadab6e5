use crate::feasibility::ViolationReport;
use crate::model::{Diagnostic, StructureError};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Format(String),

    #[error("instance has {} validation error(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    InvalidInstance(Vec<Diagnostic>),

    #[error(transparent)]
    Structure(#[from] StructureError),

    #[error("model too large: {variables} variables, {rows} rows, {nonzeros} nonzeros (limit {limit} nonzeros)")]
    ModelTooLarge {
        variables: usize,
        rows: usize,
        nonzeros: usize,
        limit: usize,
    },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("repair gave up after {attempts} attempts with {} violation(s) left", .residual.len())]
    RepairExhausted {
        attempts: usize,
        residual: ViolationReport,
    },

    #[error("no applicable move for this schedule")]
    NoApplicableMove,

    #[error("search space too large for exhaustive enumeration: {0}")]
    SearchTooLarge(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
