use crate::rng;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Small,
    Medium,
    Big,
    /// Desk-sized instances inside the exhaustive solver's bounds.
    Tiny,
    Custom,
}

/// Wildfire shape: `nodes` drop points per epoch and `evolutions` declared
/// evolutions, so `nodes * (evolutions + 1)` drop points in total.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FireType {
    pub nodes: usize,
    pub evolutions: usize,
}

impl FireType {
    pub const SMALL: FireType = FireType { nodes: 3, evolutions: 0 };
    /// The four medium-family fires: 10, 18, 30 and 40 drop points.
    pub const MEDIUM: [FireType; 4] = [
        FireType { nodes: 5, evolutions: 1 },
        FireType { nodes: 3, evolutions: 5 },
        FireType { nodes: 5, evolutions: 5 },
        FireType { nodes: 10, evolutions: 3 },
    ];

    pub fn drop_points(&self) -> usize {
        self.nodes * (self.evolutions + 1)
    }

    /// The medium fire type with the given number of drop points.
    pub fn with_drop_points(points: usize) -> Option<FireType> {
        Self::MEDIUM.into_iter().find(|f| f.drop_points() == points)
    }
}

/// Regulation values in intervals that replace the minute-based defaults.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RegulationOverride {
    pub max_consecutive_flight: Option<u32>,
    pub min_rest: Option<u32>,
    pub max_total_flight: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub family: Family,
    pub helicopters: usize,
    pub trajectories: usize,
    pub fire: FireType,
    pub horizon_minutes: u32,
    pub interval_minutes: u32,
    pub water_points: usize,
    pub bases: usize,
    pub seed: u64,
    #[serde(default)]
    pub regulation: RegulationOverride,
}

// (helicopters, trajectories, hours, interval minutes)
const SMALL: [(usize, usize, u32, u32); 10] = [
    (2, 2, 2, 5),
    (3, 2, 2, 5),
    (5, 3, 2, 5),
    (7, 3, 2, 5),
    (3, 2, 4, 10),
    (2, 2, 4, 5),
    (3, 2, 2, 2),
    (2, 1, 2, 2),
    (5, 3, 2, 2),
    (7, 3, 4, 10),
];

// (helicopters, trajectories, drop points); 8 hours on a 10-minute grid
const MEDIUM: [(usize, usize, usize); 20] = [
    (5, 3, 10),
    (10, 3, 10),
    (15, 5, 10),
    (20, 5, 10),
    (25, 5, 10),
    (5, 3, 18),
    (10, 3, 18),
    (15, 3, 18),
    (20, 3, 18),
    (25, 3, 18),
    (5, 3, 30),
    (10, 3, 30),
    (15, 5, 30),
    (20, 5, 30),
    (25, 5, 30),
    (5, 3, 40),
    (10, 3, 40),
    (15, 3, 40),
    (20, 3, 40),
    (25, 3, 40),
];

// (helicopters, trajectories, drop points, hours, interval minutes)
const BIG: [(usize, usize, usize, u32, u32); 10] = [
    (5, 3, 10, 13, 1),
    (10, 3, 10, 13, 5),
    (15, 5, 10, 8, 1),
    (20, 5, 10, 8, 5),
    (5, 3, 18, 8, 1),
    (10, 3, 18, 8, 5),
    (15, 5, 18, 13, 5),
    (25, 5, 18, 8, 5),
    (5, 3, 30, 13, 5),
    (10, 3, 30, 8, 5),
];

impl FamilySpec {
    /// `S1` to `S10`: 3 drop points, 5 water points, 5 bases.
    pub fn small(n: usize) -> Self {
        assert!((1..=SMALL.len()).contains(&n), "small family has rows 1 to {}", SMALL.len());
        let (h, w, hours, step) = SMALL[n - 1];
        Self {
            name: format!("S{n}"),
            family: Family::Small,
            helicopters: h,
            trajectories: w,
            fire: FireType::SMALL,
            horizon_minutes: hours * 60,
            interval_minutes: step,
            water_points: 5,
            bases: 5,
            seed: n as u64,
            regulation: RegulationOverride::default(),
        }
    }

    /// `M1` to `M20`: 8 hours in 10-minute intervals, 10 water points,
    /// 5 bases.
    pub fn medium(n: usize) -> Self {
        assert!((1..=MEDIUM.len()).contains(&n), "medium family has rows 1 to {}", MEDIUM.len());
        let (h, w, points) = MEDIUM[n - 1];
        Self {
            name: format!("M{n}"),
            family: Family::Medium,
            helicopters: h,
            trajectories: w,
            fire: FireType::with_drop_points(points).expect("table uses known fire types"),
            horizon_minutes: 8 * 60,
            interval_minutes: 10,
            water_points: 10,
            bases: 5,
            seed: 100 + n as u64,
            regulation: RegulationOverride::default(),
        }
    }

    /// `B1` to `B10`: 8 to 13 hours in 1 or 5-minute intervals.
    pub fn big(n: usize) -> Self {
        assert!((1..=BIG.len()).contains(&n), "big family has rows 1 to {}", BIG.len());
        let (h, w, points, hours, step) = BIG[n - 1];
        Self {
            name: format!("B{n}"),
            family: Family::Big,
            helicopters: h,
            trajectories: w,
            fire: FireType::with_drop_points(points).expect("table uses known fire types"),
            horizon_minutes: hours * 60,
            interval_minutes: step,
            water_points: 10,
            bases: 5,
            seed: 200 + n as u64,
            regulation: RegulationOverride::default(),
        }
    }

    /// The shape of the published B12 plan: 10 helicopters, 3 trajectories,
    /// 30 drop points, 8 hours in 5-minute intervals.
    pub fn b12() -> Self {
        Self {
            name: "B12".into(),
            family: Family::Big,
            helicopters: 10,
            trajectories: 3,
            fire: FireType { nodes: 5, evolutions: 5 },
            horizon_minutes: 8 * 60,
            interval_minutes: 5,
            water_points: 10,
            bases: 5,
            seed: 212,
            regulation: RegulationOverride::default(),
        }
    }

    /// A random instance shape inside the exhaustive solver's bounds: at most
    /// 2 helicopters, 12 intervals, 2 drop points, 2 water points, 1 base.
    pub fn tiny(seed: u64) -> Self {
        let mut r = rng::from_seed(rng::sub_seed(seed, 0x7111));
        let helicopters = r.random_range(1..=2);
        let trajectories = if helicopters == 2 && r.random_bool(0.5) { 2 } else { 1 };
        let fire = match r.random_range(0..3) {
            0 => FireType { nodes: 1, evolutions: 0 },
            1 => FireType { nodes: 2, evolutions: 0 },
            _ => FireType { nodes: 1, evolutions: 1 },
        };
        let horizon = r.random_range(8..=12u32);
        Self {
            name: format!("T{seed}"),
            family: Family::Tiny,
            helicopters,
            trajectories,
            fire,
            horizon_minutes: horizon * 5,
            interval_minutes: 5,
            water_points: r.random_range(1..=2),
            bases: 1,
            seed,
            regulation: RegulationOverride {
                max_consecutive_flight: Some(r.random_range(5..=9)),
                min_rest: Some(r.random_range(2..=3)),
                max_total_flight: None,
            },
        }
    }

    /// Looks a spec up by table name (`S3`, `M12`, `B7`, `B12`).
    pub fn by_name(name: &str) -> Option<Self> {
        if name.eq_ignore_ascii_case("b12") {
            return Some(Self::b12());
        }
        let (head, tail) = name.split_at(1.min(name.len()));
        let n: usize = tail.parse().ok()?;
        match head {
            "S" | "s" if (1..=SMALL.len()).contains(&n) => Some(Self::small(n)),
            "M" | "m" if (1..=MEDIUM.len()).contains(&n) => Some(Self::medium(n)),
            "B" | "b" if (1..=BIG.len()).contains(&n) => Some(Self::big(n)),
            "T" | "t" => Some(Self::tiny(n as u64)),
            _ => None,
        }
    }

    /// Every row of one family.
    pub fn family_rows(family: Family) -> Vec<Self> {
        match family {
            Family::Small => (1..=SMALL.len()).map(Self::small).collect(),
            Family::Medium => (1..=MEDIUM.len()).map(Self::medium).collect(),
            Family::Big => (1..=BIG.len()).map(Self::big).collect(),
            Family::Tiny => (1..=20).map(Self::tiny).collect(),
            Family::Custom => Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn horizon_intervals(&self) -> usize {
        self.horizon_minutes.div_ceil(self.interval_minutes) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let s1 = FamilySpec::small(1);
        assert_eq!((s1.helicopters, s1.trajectories, s1.horizon_intervals()), (2, 2, 24));
        let m5 = FamilySpec::medium(5);
        assert_eq!((m5.helicopters, m5.trajectories, m5.fire.drop_points()), (25, 5, 10));
        let b1 = FamilySpec::big(1);
        assert_eq!(b1.horizon_intervals(), 780);
        assert_eq!(FamilySpec::b12().horizon_intervals(), 96);
        assert_eq!(FamilySpec::by_name("M17").unwrap().fire.drop_points(), 40);
    }
}
