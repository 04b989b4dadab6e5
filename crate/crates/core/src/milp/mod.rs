//! The full mixed-integer model: variable registry, rows, LP-format output
//! and evaluation of explicit assignments.

mod assignment;
mod build;
mod lp;

pub use assignment::{schedule_to_assignment, Assignment};
pub use build::{build_milp, build_milp_with_limit, DEFAULT_NONZERO_LIMIT};
pub use lp::emit_lp;

use crate::feasibility::{RowKey, Violation, ViolationReport};
use std::collections::HashMap;

pub type VarId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    /// Continuous with lower bound 0.
    NonNegative,
    /// Continuous without bounds.
    Free,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub key: RowKey,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Row {
    pub fn lhs(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    pub fn satisfied(&self, values: &[f64], tol: f64) -> bool {
        let lhs = self.lhs(values);
        match self.sense {
            Sense::Le => lhs <= self.rhs + tol,
            Sense::Ge => lhs >= self.rhs - tol,
            Sense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub rows: Vec<Row>,
    /// Maximized.
    pub objective: Vec<(VarId, f64)>,
    /// Free-text notes written as comment lines at the top of the LP file.
    pub notes: Vec<String>,
    index: HashMap<String, VarId>,
}

impl MilpModel {
    pub fn add_var(&mut self, name: String, kind: VarKind) -> VarId {
        let id = self.variables.len();
        self.index.insert(name.clone(), id);
        self.variables.push(Variable { name, kind });
        id
    }

    pub fn var(&self, name: &str) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn nonzeros(&self) -> usize {
        self.rows.iter().map(|r| r.terms.len()).sum()
    }

    /// Variable values in registry order; names missing from the assignment
    /// count as 0.
    pub fn values(&self, assignment: &Assignment) -> Vec<f64> {
        self.variables.iter().map(|v| assignment.get(&v.name)).collect()
    }

    pub fn objective_value(&self, assignment: &Assignment) -> f64 {
        let values = self.values(assignment);
        self.objective.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// Number of variables per name prefix (`y`, `x`, `ec`, ...).
    pub fn census(&self) -> std::collections::BTreeMap<String, usize> {
        let mut out = std::collections::BTreeMap::new();
        for v in &self.variables {
            let prefix = v.name.split('_').next().unwrap_or_default().to_string();
            *out.entry(prefix).or_default() += 1;
        }
        out
    }

    /// Binary variables whose value is not 0 or 1 and nonnegative variables
    /// below 0, as variable names.
    pub fn domain_violations(&self, assignment: &Assignment) -> Vec<String> {
        self.variables
            .iter()
            .filter(|v| {
                let x = assignment.get(&v.name);
                match v.kind {
                    VarKind::Binary => x.abs() > CHECK_TOL && (x - 1.0).abs() > CHECK_TOL,
                    VarKind::NonNegative => x < -CHECK_TOL,
                    VarKind::Free => false,
                }
            })
            .map(|v| v.name.clone())
            .collect()
    }
}

/// Absolute tolerance used when evaluating rows.
pub const CHECK_TOL: f64 = 1e-6;

/// Evaluates every row of the model at an assignment.
pub fn check_assignment(model: &MilpModel, assignment: &Assignment) -> ViolationReport {
    let values = model.values(assignment);
    let violations = model
        .rows
        .iter()
        .filter(|r| !r.satisfied(&values, CHECK_TOL))
        .map(|r| Violation {
            row: r.key,
            message: format!("lhs {} {} {}", r.lhs(&values), r.sense.symbol(), r.rhs),
        })
        .collect();
    ViolationReport::from_unsorted(violations)
}
