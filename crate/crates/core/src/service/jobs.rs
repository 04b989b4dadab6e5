use crate::bench::{render_svg, run_algorithm_observed, summarize, Algorithm, SummaryRow};
use crate::config::Config;
use crate::feasibility::check_schedule;
use crate::improve::{Budget, CheckpointRecord, RunTrace};
use crate::model::format::ScheduleDoc;
use crate::model::Instance;
use crate::objective::{evaluate, ObjectiveValue};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JobState {
    Queued,
    Running,
    Done,
    Failed,
}

impl JobState {
    /// Allowed transitions: queued → running → done or failed. A queued job
    /// may also fail, e.g. when the service restarts before it runs.
    pub fn can_become(self, next: JobState) -> bool {
        matches!(
            (self, next),
            (JobState::Queued, JobState::Running)
                | (JobState::Queued, JobState::Failed)
                | (JobState::Running, JobState::Done)
                | (JobState::Running, JobState::Failed)
        )
    }
}

/// Body of `POST /plans`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanRequest {
    pub instance: String,
    pub algorithm: Algorithm,
    /// Defaults to the configured wall-clock budget.
    #[serde(default)]
    pub budget: Option<Budget>,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to the configured checkpoints for wall-clock budgets.
    #[serde(default)]
    pub checkpoints: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJob {
    pub id: String,
    pub instance: String,
    pub algorithm: Algorithm,
    pub budget: Budget,
    pub seed: u64,
    pub checkpoints: Vec<f64>,
    pub state: JobState,
    /// Milliseconds since the Unix epoch.
    pub submitted_at: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub started_at: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<u64>,
    /// Checkpoints passed so far; the last one holds the running best.
    #[serde(default)]
    pub progress: Vec<CheckpointRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl PlanJob {
    pub fn new(id: String, req: PlanRequest, config: &Config, now: u64) -> Self {
        let budget = req
            .budget
            .unwrap_or(Budget::Seconds(config.service.budget_seconds as f64));
        let checkpoints = req.checkpoints.unwrap_or_else(|| match budget {
            Budget::Seconds(_) => config.service.checkpoint_seconds.iter().map(|&s| s as f64).collect(),
            Budget::Iterations(_) => Vec::new(),
        });
        Self {
            id,
            instance: req.instance,
            algorithm: req.algorithm,
            budget,
            seed: req.seed,
            checkpoints,
            state: JobState::Queued,
            submitted_at: now,
            started_at: None,
            finished_at: None,
            progress: Vec::new(),
            best: None,
            error: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanResult {
    pub schedule: ScheduleDoc,
    pub objective: ObjectiveValue,
    pub summary: SummaryRow,
    pub trace: RunTrace,
    pub gantt_svg: String,
}

/// Runs the job's driver and re-checks the best schedule before it is
/// accepted. Any error comes back as the failure message.
pub fn execute(
    instance: &Instance,
    job: &PlanJob,
    config: &Config,
    observer: &mut dyn FnMut(&CheckpointRecord),
) -> Result<PlanResult, String> {
    let run = run_algorithm_observed(instance, job.algorithm, job.budget, &job.checkpoints, job.seed, config, observer)
        .map_err(|e| e.to_string())?;
    let schedule = run.best.schedule;
    let report = check_schedule(instance, &schedule).map_err(|e| e.to_string())?;
    if !report.is_empty() {
        let rows: Vec<String> = report.iter().take(5).map(|v| format!("{}: {}", v.row, v.message)).collect();
        return Err(format!(
            "best schedule failed verification ({} violations): {}",
            report.len(),
            rows.join("; ")
        ));
    }
    let objective = evaluate(instance, &schedule).map_err(|e| e.to_string())?;
    let summary = summarize(instance, &schedule).map_err(|e| e.to_string())?;
    Ok(PlanResult {
        schedule: ScheduleDoc::from_schedule(instance, &schedule),
        objective,
        summary,
        trace: run.trace,
        gantt_svg: render_svg(instance, &schedule),
    })
}

