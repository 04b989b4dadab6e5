use super::{Instance, NodeKind, Partition};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Location inside the instance document, e.g. `helicopters[h2].min_rest`.
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn error(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        }
    }

    fn warning(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag} at {}: {}", self.path, self.message)
    }
}

/// Fails with every error-level diagnostic, if any.
pub fn ensure_valid(inst: &Instance) -> crate::Result<()> {
    let errors: Vec<Diagnostic> = validate_instance(inst).into_iter().filter(|d| d.is_error()).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(crate::Error::InvalidInstance(errors))
    }
}

/// Checks every structural invariant of an instance. Errors make the instance
/// unusable; warnings flag unusual but accepted input.
pub fn validate_instance(inst: &Instance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let horizon = inst.horizon();
    let n_nodes = inst.nodes.len();
    let n_helis = inst.helicopters.len();

    if horizon < 2 {
        out.push(Diagnostic::error("grid.horizon_intervals", "horizon must have at least 2 intervals"));
    }
    if inst.grid.interval_minutes == 0 {
        out.push(Diagnostic::error("grid.interval_minutes", "interval length must be positive"));
    } else if ![1, 2, 5, 10].contains(&inst.grid.interval_minutes) {
        out.push(Diagnostic::warning(
            "grid.interval_minutes",
            format!("unusual interval length of {} minutes", inst.grid.interval_minutes),
        ));
    }

    let mut seen = HashSet::new();
    for node in &inst.nodes {
        let path = format!("nodes[{}]", node.id);
        if node.id.is_empty() {
            out.push(Diagnostic::error(path.clone(), "empty node id"));
        }
        if !seen.insert(node.id.as_str()) {
            out.push(Diagnostic::error(path.clone(), "duplicate node id"));
        }
        match &node.kind {
            NodeKind::StartPosition => {}
            NodeKind::WaterPoint {
                capacity_liters,
                simultaneous,
            } => {
                if !(capacity_liters.is_finite() && *capacity_liters >= 0.0) || capacity_liters.fract() != 0.0 {
                    out.push(Diagnostic::error(
                        format!("{path}.capacity"),
                        "water capacity must be a nonnegative integer",
                    ));
                }
                if *simultaneous < 1 {
                    out.push(Diagnostic::error(
                        format!("{path}.simultaneous"),
                        "at least one helicopter must be able to load",
                    ));
                }
            }
            NodeKind::Wildfire { efficiency } => {
                if efficiency.len() != horizon {
                    out.push(Diagnostic::error(
                        format!("{path}.efficiency"),
                        format!("expected {horizon} values, found {}", efficiency.len()),
                    ));
                }
                for (t, &v) in efficiency.iter().enumerate() {
                    if !(0.0..=10.0).contains(&v) {
                        out.push(Diagnostic::error(
                            format!("{path}.efficiency[{}]", t + 1),
                            format!("efficiency {v} outside [0, 10]"),
                        ));
                    }
                }
            }
            NodeKind::RestBase { capacity } => {
                if *capacity < 1 {
                    out.push(Diagnostic::error(format!("{path}.capacity"), "base capacity must be positive"));
                }
            }
        }
    }

    let mut pairs = HashSet::new();
    for (e, edge) in inst.edges.iter().enumerate() {
        let path = format!("edges[{e}]");
        if edge.from.0 >= n_nodes || edge.to.0 >= n_nodes {
            out.push(Diagnostic::error(path, "edge references an unknown node"));
            continue;
        }
        if edge.from == edge.to {
            out.push(Diagnostic::error(path.clone(), "self loop"));
        }
        if !pairs.insert((edge.from, edge.to)) {
            out.push(Diagnostic::error(path.clone(), "duplicate edge"));
        }
        if inst.partition(edge.to) == Partition::Start {
            out.push(Diagnostic::error(path.clone(), "edges may not enter a start position"));
        }
        if edge.flight_time.len() != n_helis {
            out.push(Diagnostic::error(
                format!("{path}.flight_time"),
                format!("expected {n_helis} flight times, found {}", edge.flight_time.len()),
            ));
        }
        if edge.flight_time.iter().any(|&l| l < 1) {
            out.push(Diagnostic::error(format!("{path}.flight_time"), "flight times must be at least 1"));
        }
    }

    let mut traj_ids = HashSet::new();
    for w in &inst.trajectories {
        if !traj_ids.insert(w.as_str()) {
            out.push(Diagnostic::error(format!("trajectories[{w}]"), "duplicate trajectory id"));
        }
    }

    let mut heli_ids = HashSet::new();
    for h in &inst.helicopters {
        let path = format!("helicopters[{}]", h.id);
        if !heli_ids.insert(h.id.as_str()) {
            out.push(Diagnostic::error(path.clone(), "duplicate helicopter id"));
        }
        if h.start.0 >= n_nodes || inst.partition(h.start) != Partition::Start {
            out.push(Diagnostic::error(format!("{path}.start"), "start must be a start-position node"));
        }
        if !(h.water_capacity.is_finite() && h.water_capacity > 0.0) {
            out.push(Diagnostic::error(format!("{path}.water_capacity"), "water capacity must be positive"));
        }
        if h.consecutive_flight > h.max_consecutive_flight {
            out.push(Diagnostic::error(
                format!("{path}.consecutive_flight"),
                "consecutive flight already exceeds its maximum",
            ));
        }
        if h.total_flight > h.max_total_flight {
            out.push(Diagnostic::error(format!("{path}.total_flight"), "total flight already exceeds its maximum"));
        }
        if h.min_rest < 1 {
            out.push(Diagnostic::error(format!("{path}.min_rest"), "minimum rest must be at least 1 interval"));
        }
        if h.trajectory.0 >= inst.trajectories.len() {
            out.push(Diagnostic::error(format!("{path}.trajectory"), "unknown trajectory"));
        }
        if h.service_time.len() != n_nodes {
            out.push(Diagnostic::error(
                format!("{path}.load_drop_time"),
                format!("expected {n_nodes} durations, found {}", h.service_time.len()),
            ));
        } else if h.service_time.iter().any(|&d| d < 1) {
            out.push(Diagnostic::error(format!("{path}.load_drop_time"), "durations must be at least 1"));
        }
    }

    if inst.evolution.len() != horizon {
        out.push(Diagnostic::error(
            "evolution",
            format!("expected {horizon} flags, found {}", inst.evolution.len()),
        ));
    } else {
        for t in 1..horizon {
            let changed = inst.fires().iter().any(|&i| {
                let ef = |t| inst.efficiency(i, t);
                ef(t) != ef(t - 1)
            });
            if changed != inst.evolution[t] {
                out.push(Diagnostic::warning(
                    format!("evolution[{}]", t + 1),
                    if changed {
                        "efficiencies change but no evolution is declared"
                    } else {
                        "evolution declared but no efficiency changes"
                    },
                ));
            }
        }
    }

    if let Err(msg) = inst.weights.check() {
        out.push(Diagnostic::error("weights", msg));
    }
    out
}
