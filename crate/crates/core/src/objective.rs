//! The six-term objective and the relative percentage difference.

use crate::feasibility::Derived;
use crate::model::{Activity, Instance, NodeKind, Schedule, StructureError};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalizers {
    pub ub1: f64,
    pub ub2: f64,
    pub ub3: f64,
    pub ub4: f64,
}

/// Penalty weights. Normalizers are derived from the instance unless given
/// explicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObjectiveWeights {
    pub mu2: f64,
    pub mu3: f64,
    pub mu4: f64,
    pub mu5: f64,
    pub mu6: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalizers: Option<Normalizers>,
}

impl Default for ObjectiveWeights {
    fn default() -> Self {
        Self {
            mu2: 0.1,
            mu3: 0.05,
            mu4: 0.01,
            mu5: 0.005,
            mu6: 0.001,
            normalizers: None,
        }
    }
}

impl ObjectiveWeights {
    /// Weights must be nonnegative and strictly decreasing from `mu2` to
    /// `mu6`; explicit normalizers must be positive.
    pub fn check(&self) -> Result<(), String> {
        let mu = [self.mu2, self.mu3, self.mu4, self.mu5, self.mu6];
        if mu.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err("weights must be finite and nonnegative".into());
        }
        if mu.windows(2).any(|p| p[0] <= p[1]) {
            return Err("weights must satisfy mu2 > mu3 > mu4 > mu5 > mu6".into());
        }
        if let Some(n) = &self.normalizers {
            if [n.ub1, n.ub2, n.ub3, n.ub4].iter().any(|u| !u.is_finite() || *u <= 0.0) {
                return Err("normalizers must be positive".into());
            }
        }
        Ok(())
    }
}

/// `ub1 = |T| · max ef · Σ wc`, `ub2 = ub3 = |A| · |T|`, `ub4 = |W| · |T|`,
/// each at least 1.
pub fn compute_normalizers(instance: &Instance) -> Normalizers {
    let horizon = instance.horizon() as f64;
    let max_ef = instance
        .nodes
        .iter()
        .filter_map(|n| match &n.kind {
            NodeKind::Wildfire { efficiency } => efficiency.iter().copied().reduce(f64::max),
            _ => None,
        })
        .fold(0.0, f64::max);
    let total_wc: f64 = instance.helicopters.iter().map(|h| h.water_capacity).sum();
    let fleet = instance.helicopters.len() as f64;
    Normalizers {
        ub1: (horizon * max_ef * total_wc).max(1.0),
        ub2: (fleet * horizon).max(1.0),
        ub3: (fleet * horizon).max(1.0),
        ub4: (instance.trajectories.len() as f64 * horizon).max(1.0),
    }
}

/// Normalizers in effect for an instance: the explicit ones from its weights,
/// or the computed defaults.
pub fn normalizers(instance: &Instance) -> Normalizers {
    instance
        .weights
        .normalizers
        .unwrap_or_else(|| compute_normalizers(instance))
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Terms {
    /// Σ ef · wc over intervals spent at wildfire nodes.
    pub efficiency_raw: f64,
    /// Flying intervals.
    pub flights_raw: f64,
    /// Intervals spent at water points or wildfire nodes.
    pub hover_raw: f64,
    /// Trajectory changes.
    pub changes_raw: f64,
    /// Interior intervals with nobody working.
    pub h1_sum: f64,
    /// Final counter pad summed over the fleet.
    pub faux_sum: f64,
}

/// Signed contribution of each term to the total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Contributions {
    pub efficiency: f64,
    pub flights: f64,
    pub hover: f64,
    pub changes: f64,
    pub h1: f64,
    pub faux: f64,
}

impl Contributions {
    pub fn sum(&self) -> f64 {
        self.efficiency + self.flights + self.hover + self.changes + self.h1 + self.faux
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub total: f64,
    pub terms: Terms,
    pub contributions: Contributions,
    pub normalizers: Normalizers,
}

impl ObjectiveValue {
    /// Fixed-order `key: value` listing.
    pub fn to_block(&self) -> String {
        let mut s = String::new();
        let t = &self.terms;
        let c = &self.contributions;
        let n = &self.normalizers;
        let _ = writeln!(s, "total: {:.6}", self.total);
        let _ = writeln!(s, "efficiency_raw: {}", t.efficiency_raw);
        let _ = writeln!(s, "flights_raw: {}", t.flights_raw);
        let _ = writeln!(s, "hover_raw: {}", t.hover_raw);
        let _ = writeln!(s, "changes_raw: {}", t.changes_raw);
        let _ = writeln!(s, "h1_sum: {}", t.h1_sum);
        let _ = writeln!(s, "faux_sum: {}", t.faux_sum);
        let _ = writeln!(s, "efficiency: {:.6}", c.efficiency);
        let _ = writeln!(s, "flights: {:.6}", c.flights);
        let _ = writeln!(s, "hover: {:.6}", c.hover);
        let _ = writeln!(s, "changes: {:.6}", c.changes);
        let _ = writeln!(s, "h1: {:.6}", c.h1);
        let _ = writeln!(s, "faux: {:.6}", c.faux);
        let _ = writeln!(s, "ub1: {}", n.ub1);
        let _ = writeln!(s, "ub2: {}", n.ub2);
        let _ = writeln!(s, "ub3: {}", n.ub3);
        let _ = writeln!(s, "ub4: {}", n.ub4);
        s
    }
}

/// Scores a structurally valid schedule, feasible or not.
pub fn evaluate(instance: &Instance, schedule: &Schedule) -> Result<ObjectiveValue, StructureError> {
    let derived = Derived::new(instance, schedule)?;
    Ok(evaluate_with(instance, schedule, &derived))
}

pub fn evaluate_with(instance: &Instance, schedule: &Schedule, derived: &Derived) -> ObjectiveValue {
    let mut terms = Terms::default();
    for (a, line) in schedule.timelines.iter().enumerate() {
        let wc = instance.helicopters[a].water_capacity;
        for (t, act) in line.iter().enumerate() {
            match *act {
                Activity::Fly(_) => terms.flights_raw += 1.0,
                Activity::At(i) if instance.is_service(i) => {
                    terms.hover_raw += 1.0;
                    if instance.is_fire(i) {
                        terms.efficiency_raw += instance.efficiency(i, t) * wc;
                    }
                }
                _ => {}
            }
        }
    }
    terms.changes_raw = derived.trajectories.changes() as f64;
    terms.h1_sum = derived.h1.iter().sum();
    terms.faux_sum = derived.flight.final_pad_sum() as f64;
    combine(instance, terms)
}

/// Applies weights and normalizers to raw terms.
pub fn combine(instance: &Instance, terms: Terms) -> ObjectiveValue {
    let w = &instance.weights;
    let n = normalizers(instance);
    let contributions = Contributions {
        efficiency: terms.efficiency_raw / n.ub1,
        flights: -w.mu2 * terms.flights_raw / n.ub2,
        hover: -w.mu3 * terms.hover_raw / n.ub3,
        changes: -w.mu4 * terms.changes_raw / n.ub4,
        h1: -w.mu5 * terms.h1_sum,
        faux: -w.mu6 * terms.faux_sum,
    };
    ObjectiveValue {
        total: contributions.sum(),
        terms,
        contributions,
        normalizers: n,
    }
}

/// Relative distance of `current` from `best`: `(best - current) / (best + epsilon)`.
pub fn rdp(best: f64, current: f64, epsilon: f64) -> f64 {
    (best - current) / (best + epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rdp_examples() {
        assert_eq!(rdp(10.0, 10.0, 1e-9), 0.0);
        assert!((rdp(10.0, 8.0, 1e-9) - 0.2).abs() < 1e-9);
        assert_eq!(rdp(0.0, 0.0, 1e-9), 0.0);
    }

    #[test]
    fn default_weights_are_lexicographic() {
        assert!(ObjectiveWeights::default().check().is_ok());
        let bad = ObjectiveWeights {
            mu3: 0.2,
            ..Default::default()
        };
        assert!(bad.check().is_err());
    }
}
