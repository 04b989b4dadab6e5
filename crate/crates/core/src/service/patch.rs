use crate::model::format::instance_to_canonical_json;
use crate::model::Instance;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sets one wildfire node's efficiency on an interval range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EfficiencyPatch {
    pub node: String,
    /// First interval, 1-based.
    pub from: usize,
    /// Last interval, 1-based and inclusive.
    pub to: usize,
    pub value: f64,
}

/// Copy of `instance` with the patch applied. Declared evolutions are kept;
/// one is added wherever the patch makes the node's efficiency differ from
/// the interval before.
pub fn patch_efficiency(instance: &Instance, patch: &EfficiencyPatch) -> Result<Instance> {
    let bad = |m: String| Err(Error::InvalidParams(m));
    if !(0.0..=10.0).contains(&patch.value) {
        return bad(format!("value {} outside [0, 10]", patch.value));
    }
    let horizon = instance.horizon();
    if patch.from < 1 || patch.from > patch.to || patch.to > horizon {
        return bad(format!("interval range [{}, {}] outside [1, {horizon}]", patch.from, patch.to));
    }
    let Some(i) = instance.node_by_id(&patch.node) else {
        return bad(format!("unknown node `{}`", patch.node));
    };
    if !instance.is_fire(i) {
        return bad(format!("node `{}` is not a wildfire node", patch.node));
    }
    let mut out = instance.clone();
    let ef = out.nodes[i.0].efficiency_mut().expect("wildfire node");
    for slot in &mut ef[patch.from - 1..patch.to] {
        *slot = patch.value;
    }
    let ef = ef.clone();
    for t in [patch.from - 1, patch.to] {
        if t > 0 && t < horizon && ef[t] != ef[t - 1] {
            out.evolution[t] = true;
        }
    }
    out.reindex();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellChange {
    pub node: String,
    /// 1-based.
    pub interval: usize,
    pub before: f64,
    pub after: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InstanceDiff {
    pub efficiency: Vec<CellChange>,
    /// 1-based intervals whose evolution flag differs.
    pub evolution: Vec<usize>,
    /// Anything besides efficiencies and evolution flags differs.
    pub other: bool,
}

pub fn diff_instances(a: &Instance, b: &Instance) -> InstanceDiff {
    let mut d = InstanceDiff::default();
    let same_shape = a.nodes.len() == b.nodes.len() && a.horizon() == b.horizon();
    if !same_shape {
        d.other = true;
        return d;
    }
    let mut probe = a.clone();
    for (k, (na, nb)) in a.nodes.iter().zip(&b.nodes).enumerate() {
        if let (Some(ea), Some(eb)) = (na.efficiency(), nb.efficiency()) {
            for (t, (x, y)) in ea.iter().zip(eb).enumerate() {
                if x != y {
                    d.efficiency.push(CellChange {
                        node: na.id.clone(),
                        interval: t + 1,
                        before: *x,
                        after: *y,
                    });
                }
            }
            if let Some(slot) = probe.nodes[k].efficiency_mut() {
                slot.clone_from(eb);
            }
        }
    }
    d.evolution = (0..a.horizon())
        .filter(|&t| a.evolution.get(t) != b.evolution.get(t))
        .map(|t| t + 1)
        .collect();
    probe.evolution.clone_from(&b.evolution);
    d.other = instance_to_canonical_json(&probe) != instance_to_canonical_json(b);
    d
}
