//! Tunable settings. The defaults ship as `heliplan.toml` next to the crate
//! manifest and are compiled in; a user file only needs the keys it changes.

use crate::objective::Normalizers;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

const DEFAULTS: &str = include_str!("../heliplan.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub sa: SaSettings,
    pub ils: IlsSettings,
    pub moves: MoveSettings,
    pub bench: BenchSettings,
    pub generator: GeneratorSettings,
    pub service: ServiceSettings,
    pub calibration: Calibration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaSettings {
    pub t_initial: f64,
    pub t_min: f64,
    pub cooling_alpha: f64,
    pub stall_limit_current: u64,
    pub stall_limit_best: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IlsSettings {
    pub outer_limit: u64,
    pub inner_budget: u64,
    pub stall_limit: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveSettings {
    pub return_to_rest_probability: f64,
    pub repair_attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSettings {
    pub rdp_epsilon: f64,
    pub checkpoint_minutes: Vec<u64>,
    /// 0 lets the thread pool decide.
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelicopterClass {
    pub name: String,
    pub speed_kmh: f64,
    pub water_capacity_liters: f64,
}

/// Geometry and fleet parameters for synthetic instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSettings {
    pub fire_jitter_km: f64,
    pub front_step_km: f64,
    pub water_distance_km: [f64; 2],
    pub base_distance_km: [f64; 2],
    pub start_distance_km: [f64; 2],
    pub load_minutes: u32,
    pub drop_minutes: u32,
    pub max_consecutive_flight_minutes: u32,
    pub min_rest_minutes: u32,
    pub max_total_flight_minutes: u32,
    pub water_capacity_liters: f64,
    pub water_simultaneous: [u32; 2],
    pub base_capacity: [u32; 2],
    pub efficiency: [u32; 2],
    pub catalogue: Vec<HelicopterClass>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceSettings {
    pub listen: String,
    pub data_dir: PathBuf,
    pub workers: usize,
    pub max_running_per_instance: usize,
    pub budget_seconds: u64,
    pub checkpoint_seconds: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    pub b12: Normalizers,
}

impl Default for Config {
    fn default() -> Self {
        Self::from_toml("").expect("built-in defaults parse")
    }
}

impl Config {
    /// Built-in defaults overlaid with the keys present in `text`.
    pub fn from_toml(text: &str) -> Result<Self> {
        let mut base: toml::Table = DEFAULTS.parse().map_err(|e| Error::Format(format!("defaults: {e}")))?;
        let user: toml::Table = text.parse().map_err(|e| Error::Format(format!("config: {e}")))?;
        merge(&mut base, user);
        let cfg: Config = toml::Value::Table(base)
            .try_into()
            .map_err(|e| Error::Format(format!("config: {e}")))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Reads an optional file, then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)?,
            None => String::new(),
        };
        let mut cfg = Self::from_toml(&text)?;
        cfg.apply_env(|k| std::env::var(k).ok())?;
        Ok(cfg)
    }

    /// `HELIPLAN_LISTEN`, `HELIPLAN_DATA_DIR`, `HELIPLAN_WORKERS`,
    /// `HELIPLAN_MAX_RUNNING`, `HELIPLAN_BUDGET_SECONDS`.
    pub fn apply_env(&mut self, get: impl Fn(&str) -> Option<String>) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: String) -> Result<T> {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidParams(format!("{key}={v} is not a number")))
        }
        if let Some(v) = get("HELIPLAN_LISTEN") {
            self.service.listen = v;
        }
        if let Some(v) = get("HELIPLAN_DATA_DIR") {
            self.service.data_dir = PathBuf::from(v);
        }
        if let Some(v) = get("HELIPLAN_WORKERS") {
            self.service.workers = num("HELIPLAN_WORKERS", v)?;
        }
        if let Some(v) = get("HELIPLAN_MAX_RUNNING") {
            self.service.max_running_per_instance = num("HELIPLAN_MAX_RUNNING", v)?;
        }
        if let Some(v) = get("HELIPLAN_BUDGET_SECONDS") {
            self.service.budget_seconds = num("HELIPLAN_BUDGET_SECONDS", v)?;
        }
        self.check()
    }

    pub fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        let sa = &self.sa;
        if !(sa.cooling_alpha > 0.0 && sa.cooling_alpha < 1.0) {
            return bad("sa.cooling_alpha must lie in (0, 1)");
        }
        if !(sa.t_min > 0.0 && sa.t_min < sa.t_initial) {
            return bad("sa.t_min must be positive and below sa.t_initial");
        }
        if self.ils.inner_budget == 0 {
            return bad("ils.inner_budget must be at least 1");
        }
        if !(0.0..=1.0).contains(&self.moves.return_to_rest_probability) {
            return bad("moves.return_to_rest_probability must lie in [0, 1]");
        }
        if self.bench.rdp_epsilon <= 0.0 {
            return bad("bench.rdp_epsilon must be positive");
        }
        if self.generator.catalogue.is_empty() {
            return bad("generator.catalogue is empty");
        }
        if self.service.workers == 0 || self.service.max_running_per_instance == 0 {
            return bad("service.workers and service.max_running_per_instance must be positive");
        }
        Ok(())
    }
}

fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}
