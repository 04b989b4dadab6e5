use super::family::FamilySpec;
use super::generate::generate_with;
use crate::config::Config;
use crate::improve::{
    iterated_local_search_observed, simulated_annealing_observed, Budget, CheckpointRecord, IlsParams, RunResult, RunTrace,
    SaParams,
};
use crate::objective::rdp;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Sa,
    Ils,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Sa => "sa",
            Algorithm::Ils => "ils",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sa" | "g+sa" => Ok(Algorithm::Sa),
            "ils" | "g+ils" => Ok(Algorithm::Ils),
            other => Err(Error::InvalidParams(format!("unknown algorithm `{other}` (expected sa or ils)"))),
        }
    }
}

/// Runs one driver with the settings from `config`.
pub fn run_algorithm(
    instance: &crate::Instance,
    algo: Algorithm,
    budget: Budget,
    checkpoints: &[f64],
    seed: u64,
    config: &Config,
) -> Result<RunResult> {
    run_algorithm_observed(instance, algo, budget, checkpoints, seed, config, &mut |_| {})
}

pub fn run_algorithm_observed(
    instance: &crate::Instance,
    algo: Algorithm,
    budget: Budget,
    checkpoints: &[f64],
    seed: u64,
    config: &Config,
    observer: &mut dyn FnMut(&CheckpointRecord),
) -> Result<RunResult> {
    match algo {
        Algorithm::Sa => {
            let mut p = SaParams::from_config(config, budget, seed);
            p.checkpoints = checkpoints.to_vec();
            simulated_annealing_observed(instance, &p, observer)
        }
        Algorithm::Ils => {
            let mut p = IlsParams::from_config(config, budget, seed);
            p.checkpoints = checkpoints.to_vec();
            iterated_local_search_observed(instance, &p, observer)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRequest {
    pub repetitions: usize,
    pub budget: Budget,
    /// Marks in the budget's unit; the final best is always reported too.
    pub checkpoints: Vec<f64>,
    /// Run `r` uses seed `first_seed + r`.
    pub first_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub spec: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<RunTrace>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Objective statistics of one (spec, method) pair at one checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub spec: String,
    pub method: String,
    /// Checkpoint mark; `None` is the end of the run.
    pub mark: Option<f64>,
    pub runs: usize,
    pub mean: f64,
    pub stdev: f64,
    /// Relative distance of the mean from the spec's best value.
    pub rdp: f64,
}

/// A result obtained outside the harness, e.g. from an external MILP solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalResult {
    pub spec: String,
    pub method: String,
    pub mark: Option<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub request: ComparisonRequest,
    pub runs: Vec<RunRecord>,
    pub cells: Vec<Cell>,
    /// Best value seen per spec over all methods and checkpoints.
    pub best: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub external: Vec<ExternalResult>,
}

/// Runs every algorithm `repetitions` times on every spec, `workers` runs at
/// a time (0 means one per core), and aggregates the results. A failed run
/// is recorded with its error and left out of the statistics.
pub fn run_comparison(
    specs: &[FamilySpec],
    algos: &[Algorithm],
    request: &ComparisonRequest,
    config: &Config,
) -> Result<ComparisonReport> {
    let instances: Vec<_> = specs.iter().map(|s| generate_with(s, &config.generator)).collect();
    let mut jobs = Vec::new();
    for (k, spec) in specs.iter().enumerate() {
        for &algo in algos {
            for r in 0..request.repetitions {
                jobs.push((k, spec.name.clone(), algo, request.first_seed + r as u64));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.bench.workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    let mut runs: Vec<RunRecord> = pool.install(|| {
        jobs.par_iter()
            .map(|(k, spec, algo, seed)| {
                let out = run_algorithm(&instances[*k], *algo, request.budget, &request.checkpoints, *seed, config);
                let (trace, error) = match out {
                    Ok(r) => (Some(r.trace), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                RunRecord {
                    spec: spec.clone(),
                    algorithm: *algo,
                    seed: *seed,
                    trace,
                    error,
                }
            })
            .collect()
    });
    let order: BTreeMap<&str, usize> = specs.iter().enumerate().map(|(k, s)| (s.name.as_str(), k)).collect();
    runs.sort_by_key(|r| (order[r.spec.as_str()], r.algorithm, r.seed));
    let mut report = ComparisonReport {
        request: request.clone(),
        runs,
        cells: Vec::new(),
        best: BTreeMap::new(),
        external: Vec::new(),
    };
    report.aggregate(config.bench.rdp_epsilon);
    Ok(report)
}

fn mean_stdev(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    // Sample standard deviation; 0 for a single run.
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

impl ComparisonReport {
    /// Adds external results and recomputes the best values and RDPs.
    pub fn merge_external(&mut self, rows: Vec<ExternalResult>, epsilon: f64) {
        self.external.extend(rows);
        self.aggregate(epsilon);
    }

    fn aggregate(&mut self, epsilon: f64) {
        let mut marks: Vec<Option<f64>> = self.request.checkpoints.iter().copied().map(Some).collect();
        marks.sort_by(|a, b| a.unwrap().total_cmp(&b.unwrap()));
        marks.dedup();
        marks.push(None);

        let mut cells = Vec::new();
        let mut seen: Vec<(String, Algorithm)> = Vec::new();
        for r in &self.runs {
            if !seen.contains(&(r.spec.clone(), r.algorithm)) {
                seen.push((r.spec.clone(), r.algorithm));
            }
        }
        for (spec, algo) in &seen {
            let traces: Vec<&RunTrace> = self
                .runs
                .iter()
                .filter(|r| &r.spec == spec && r.algorithm == *algo)
                .filter_map(|r| r.trace.as_ref())
                .collect();
            if traces.is_empty() {
                continue;
            }
            for &mark in &marks {
                let values: Vec<f64> = traces
                    .iter()
                    .map(|t| match mark {
                        None => t.best,
                        Some(m) => t.checkpoints.iter().find(|c| c.mark == m).map_or(t.best, |c| c.best),
                    })
                    .collect();
                let (mean, stdev) = mean_stdev(&values);
                cells.push(Cell {
                    spec: spec.clone(),
                    method: format!("g+{algo}"),
                    mark,
                    runs: values.len(),
                    mean,
                    stdev,
                    rdp: 0.0,
                });
            }
        }
        for x in &self.external {
            cells.push(Cell {
                spec: x.spec.clone(),
                method: x.method.clone(),
                mark: x.mark,
                runs: 1,
                mean: x.objective,
                stdev: 0.0,
                rdp: 0.0,
            });
        }
        let mut best: BTreeMap<String, f64> = BTreeMap::new();
        for c in &cells {
            let b = best.entry(c.spec.clone()).or_insert(f64::NEG_INFINITY);
            *b = b.max(c.mean);
        }
        for c in &mut cells {
            c.rdp = rdp(best[&c.spec], c.mean, epsilon);
        }
        self.cells = cells;
        self.best = best;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text table: one line per (spec, method), one column per
    /// checkpoint with `mean ± stdev (rdp)`.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String, Vec<&Cell>)> = Vec::new();
        for c in &self.cells {
            match rows.iter_mut().find(|(s, m, _)| *s == c.spec && *m == c.method) {
                Some(row) => row.2.push(c),
                None => rows.push((c.spec.clone(), c.method.clone(), vec![c])),
            }
        }
        let mut marks: Vec<Option<f64>> = Vec::new();
        for c in &self.cells {
            if !marks.contains(&c.mark) {
                marks.push(c.mark);
            }
        }
        marks.sort_by(|a, b| match (a, b) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, _) => std::cmp::Ordering::Greater,
            (_, None) => std::cmp::Ordering::Less,
            (Some(x), Some(y)) => x.total_cmp(y),
        });
        let head = |m: &Option<f64>| m.map_or("final".to_string(), |v| format!("@{v}"));
        let cell_text = |c: Option<&&Cell>| {
            c.map_or("-".to_string(), |c| format!("{:.4} ± {:.4} ({:.4})", c.mean, c.stdev, c.rdp))
        };
        let mut grid: Vec<Vec<String>> = vec![std::iter::once("spec".to_string())
            .chain(std::iter::once("method".to_string()))
            .chain(marks.iter().map(head))
            .collect()];
        for (spec, method, cs) in &rows {
            let mut line = vec![spec.clone(), method.clone()];
            line.extend(marks.iter().map(|m| cell_text(cs.iter().find(|c| c.mark == *m))));
            grid.push(line);
        }
        let widths: Vec<usize> = (0..grid[0].len())
            .map(|k| grid.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
            .collect();
        let mut s = String::new();
        for row in &grid {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(k, (v, w))| {
                    let pad = w - v.chars().count();
                    if k < 2 {
                        format!("{v}{}", " ".repeat(pad))
                    } else {
                        format!("{}{v}", " ".repeat(pad))
                    }
                })
                .collect();
            let _ = writeln!(s, "{}", line.join("  ").trim_end());
        }
        let failed = self.runs.iter().filter(|r| r.error.is_some()).count();
        if failed > 0 {
            let _ = writeln!(s, "{failed} run(s) failed");
        }
        s
    }
}

/// Reads external results from CSV with the header
/// `spec,method,mark,objective`; an empty mark means the final value.
pub fn read_external_csv(text: &str) -> Result<Vec<ExternalResult>> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    rd.deserialize()
        .map(|row| row.map_err(|e| Error::Format(format!("external results: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(reps: usize) -> ComparisonRequest {
        ComparisonRequest {
            repetitions: reps,
            budget: Budget::Iterations(200),
            checkpoints: vec![100.0],
            first_seed: 1,
        }
    }

    #[test]
    fn two_reps_and_their_mean() {
        let spec = FamilySpec::tiny(3);
        let r = run_comparison(&[spec], &[Algorithm::Ils], &request(2), &Config::default()).unwrap();
        assert_eq!(r.runs.len(), 2);
        assert_eq!(r.runs.iter().map(|x| x.seed).collect::<Vec<_>>(), [1, 2]);
        let fin = r.cells.iter().find(|c| c.mark.is_none()).unwrap();
        let bests: Vec<f64> = r.runs.iter().map(|x| x.trace.as_ref().unwrap().best).collect();
        assert!((fin.mean - (bests[0] + bests[1]) / 2.0).abs() < 1e-12);
        assert_eq!(fin.runs, 2);
    }

    #[test]
    fn best_cell_has_zero_rdp() {
        let r = run_comparison(
            &[FamilySpec::tiny(5)],
            &[Algorithm::Sa, Algorithm::Ils],
            &request(2),
            &Config::default(),
        )
        .unwrap();
        let best = r.best[&r.cells[0].spec];
        let top = r.cells.iter().find(|c| c.mean == best).unwrap();
        assert_eq!(top.rdp, 0.0);
        assert!(r.cells.iter().all(|c| c.rdp >= 0.0));
        assert!(r.to_table().lines().count() >= 3);
    }

    #[test]
    fn external_rows_join_the_best() {
        let mut r = run_comparison(&[FamilySpec::tiny(2)], &[Algorithm::Ils], &request(1), &Config::default()).unwrap();
        let spec = r.cells[0].spec.clone();
        let rows = read_external_csv(&format!("spec,method,mark,objective\n{spec},milp,,1000\n")).unwrap();
        r.merge_external(rows, 1e-9);
        assert_eq!(r.best[&spec], 1000.0);
        assert!(r.cells.iter().filter(|c| c.method != "milp").all(|c| c.rdp > 0.0));
    }

    #[test]
    fn parses_algorithm_names() {
        assert_eq!("G+SA".parse::<Algorithm>().unwrap(), Algorithm::Sa);
        assert!("gurobi".parse::<Algorithm>().is_err());
    }
}
