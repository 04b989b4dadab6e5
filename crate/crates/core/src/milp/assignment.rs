use crate::feasibility::Derived;
use crate::model::{Activity, Instance, Partition, Schedule, StructureError};
use std::collections::HashMap;

/// Variable values by name. Names that are absent read as 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    values: HashMap<String, f64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> f64 {
        self.values.get(name).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, name: impl Into<String>, value: f64) {
        let name = name.into();
        if value == 0.0 {
            self.values.remove(&name);
        } else {
            self.values.insert(name, value);
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Nonzero entries sorted by name.
    pub fn entries(&self) -> Vec<(&str, f64)> {
        let mut out: Vec<_> = self.values.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        out.sort_by(|a, b| a.0.cmp(b.0));
        out
    }
}

impl FromIterator<(String, f64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        let mut a = Assignment::new();
        for (k, v) in iter {
            a.set(k, v);
        }
        a
    }
}

/// The model variables induced by a schedule: presence and flights from the
/// timelines, events and counters from the ledgers, trajectory variables from
/// their reconstruction, and the blank-time slack.
pub fn schedule_to_assignment(instance: &Instance, schedule: &Schedule) -> Result<Assignment, StructureError> {
    let d = Derived::new(instance, schedule)?;
    let mut out = Assignment::new();
    let horizon = instance.horizon();
    for (a, line) in schedule.timelines.iter().enumerate() {
        for (t, act) in line.iter().enumerate() {
            let tt = t + 1;
            match *act {
                Activity::At(i) => out.set(format!("y_{}_{a}_{tt}", i.0), 1.0),
                Activity::Fly(e) => {
                    let edge = instance.edge(e);
                    out.set(format!("x_{}_{}_{a}_{tt}", edge.from.0, edge.to.0), 1.0);
                }
                Activity::Unplaced => {}
            }
            if let Some(i) = d.events.rest_end[a][t] {
                out.set(format!("e_{}_{a}_{tt}", i.0), 1.0);
            }
            if let Some(i) = d.events.load_end[a][t] {
                out.set(format!("ec_{}_{a}_{tt}", i.0), 1.0);
            }
            if let Some(i) = d.events.drop_end[a][t] {
                out.set(format!("ed_{}_{a}_{tt}", i.0), 1.0);
            }
            out.set(format!("faux_{a}_{tt}"), d.flight.pad[a][t] as f64);
            out.set(format!("z_{a}_{tt}"), d.flight.water_state[a][t] as f64);
            out.set(format!("cntv_{a}_{tt}"), d.flight.consecutive[a][t] as f64);
        }
    }
    for (k, &i) in instance.waters().iter().enumerate() {
        for t in 0..horizon {
            out.set(format!("cnta_{}_{}", i.0, t + 1), d.water.cumulative_drawn[k][t]);
            out.set(format!("ca_{}_{}", i.0, t + 1), d.water.remaining[k][t]);
        }
    }
    for w in 0..instance.trajectories.len() {
        for t in 0..horizon {
            for part in 0..2 {
                if let Some(i) = d.trajectories.node[w][part][t] {
                    debug_assert!(matches!(instance.partition(i), Partition::Water | Partition::Wildfire));
                    out.set(format!("r_{}_{w}_{}", i.0, t + 1), 1.0);
                }
            }
            if d.trajectories.change[w][t] {
                out.set(format!("aux_{w}_{}", t + 1), 1.0);
            }
            if d.trajectories.can_change[w][t] {
                out.set(format!("cw_{w}_{}", t + 1), 1.0);
            }
        }
    }
    for (t, &v) in d.h1.iter().enumerate() {
        out.set(format!("h1_{}", t + 1), v);
    }
    Ok(out)
}
