use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Model constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConstraintRef {
    /// Constraints 1 to 48.
    Model(u8),
    /// Defining equalities of the accounting quantities:
    /// 1 `cnta`, 2 `ca` for t > 1, 3 `ca` at t = 1, 4 `z` for t > 1,
    /// 5 `z` at t = 1, 6 `cntv`.
    Aux(u8),
}

impl fmt::Display for ConstraintRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintRef::Model(n) => write!(f, "{n}"),
            ConstraintRef::Aux(n) => write!(f, "AUX{n}"),
        }
    }
}

/// Indices of one row. Nodes, helicopters and trajectories are 0-based
/// positions in the instance; `t` and `l` are 1-based intervals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowIndex {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    /// Water (`c`) or wildfire (`i`) half of a row split by node partition.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<char>,
}

impl RowIndex {
    pub fn t(mut self, t: usize) -> Self {
        self.t = Some(t);
        self
    }
    pub fn a(mut self, a: usize) -> Self {
        self.a = Some(a);
        self
    }
    pub fn i(mut self, i: usize) -> Self {
        self.i = Some(i);
        self
    }
    pub fn j(mut self, j: usize) -> Self {
        self.j = Some(j);
        self
    }
    pub fn w(mut self, w: usize) -> Self {
        self.w = Some(w);
        self
    }
    pub fn l(mut self, l: usize) -> Self {
        self.l = Some(l);
        self
    }
    pub fn part(mut self, p: char) -> Self {
        self.part = Some(p);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowKey {
    pub constraint: ConstraintRef,
    #[serde(flatten)]
    pub index: RowIndex,
}

impl RowKey {
    pub fn new(constraint: ConstraintRef, index: RowIndex) -> Self {
        Self { constraint, index }
    }

    pub fn model(n: u8, index: RowIndex) -> Self {
        Self::new(ConstraintRef::Model(n), index)
    }

    /// Row name used in LP files, such as `c19_a3` or `c34c_w0_t5`.
    pub fn name(&self) -> String {
        let mut s = match self.constraint {
            ConstraintRef::Model(n) => format!("c{n}"),
            ConstraintRef::Aux(n) => format!("aux{n}"),
        };
        let ix = &self.index;
        if let Some(p) = ix.part {
            s.push(p);
        }
        for (tag, v) in [("i", ix.i), ("j", ix.j), ("a", ix.a), ("w", ix.w), ("t", ix.t), ("l", ix.l)] {
            if let Some(v) = v {
                s.push('_');
                s.push_str(tag);
                s.push_str(&v.to_string());
            }
        }
        s
    }
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(flatten)]
    pub row: RowKey,
    pub message: String,
}

/// Violated rows, sorted by constraint, then interval, then helicopter.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn from_unsorted(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| a.row.cmp(&b.row));
        violations.dedup_by(|a, b| a.row == b.row);
        Self { violations }
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter()
    }

    pub fn keys(&self) -> BTreeSet<RowKey> {
        self.violations.iter().map(|v| v.row).collect()
    }

    pub fn count_by_constraint(&self) -> BTreeMap<ConstraintRef, usize> {
        let mut out = BTreeMap::new();
        for v in &self.violations {
            *out.entry(v.row.constraint).or_default() += 1;
        }
        out
    }

    pub fn has(&self, constraint: ConstraintRef) -> bool {
        self.violations.iter().any(|v| v.row.constraint == constraint)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            out.push_str(&serde_json::to_string(v).expect("violation serializes"));
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a ViolationReport {
    type Item = &'a Violation;
    type IntoIter = std::slice::Iter<'a, Violation>;
    fn into_iter(self) -> Self::IntoIter {
        self.violations.iter()
    }
}
