//! HTTP planning service: content-addressed instances, efficiency patches
//! and background plan jobs.

mod jobs;
mod patch;
mod store;

pub use jobs::{execute, JobState, PlanJob, PlanRequest, PlanResult};
pub use patch::{diff_instances, patch_efficiency, CellChange, EfficiencyPatch, InstanceDiff};
pub use store::{content_id, Store};

use crate::config::Config;
use crate::model::format::{instance_from_json, instance_to_canonical_json};
use crate::model::{validate_instance, Instance};
use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};
use tokio::sync::Semaphore;

pub struct AppState {
    pub config: Config,
    pub store: Store,
    jobs: Mutex<HashMap<String, PlanJob>>,
    workers: Arc<Semaphore>,
    per_instance: Mutex<HashMap<String, Arc<Semaphore>>>,
}

fn now_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis() as u64)
}

impl AppState {
    /// Opens the store under `config.service.data_dir`. Jobs left queued or
    /// running by a previous process are marked failed.
    pub fn open(config: Config) -> std::io::Result<Arc<Self>> {
        let store = Store::open(&config.service.data_dir)?;
        let mut jobs = HashMap::new();
        for mut job in store.jobs()? {
            if matches!(job.state, JobState::Queued | JobState::Running) {
                job.state = JobState::Failed;
                job.error = Some("interrupted by a service restart".into());
                job.finished_at = Some(now_ms());
                store.put_job(&job)?;
            }
            jobs.insert(job.id.clone(), job);
        }
        Ok(Arc::new(Self {
            workers: Arc::new(Semaphore::new(config.service.workers)),
            config,
            store,
            jobs: Mutex::new(jobs),
            per_instance: Mutex::new(HashMap::new()),
        }))
    }

    pub fn job(&self, id: &str) -> Option<PlanJob> {
        self.jobs.lock().unwrap().get(id).cloned()
    }

    fn update(&self, id: &str, f: impl FnOnce(&mut PlanJob)) -> Option<PlanJob> {
        let mut jobs = self.jobs.lock().unwrap();
        let job = jobs.get_mut(id)?;
        f(job);
        Some(job.clone())
    }

    fn persist(&self, job: &PlanJob) {
        if let Err(e) = self.store.put_job(job) {
            tracing::error!(job = %job.id, error = %e, "could not persist job");
        }
    }

    fn transition(&self, id: &str, next: JobState, f: impl FnOnce(&mut PlanJob)) {
        let job = self.update(id, |job| {
            debug_assert!(job.state.can_become(next), "{:?} -> {next:?}", job.state);
            job.state = next;
            f(job);
        });
        if let Some(job) = job {
            self.persist(&job);
        }
    }

    fn instance_gate(&self, id: &str) -> Arc<Semaphore> {
        let limit = self.config.service.max_running_per_instance;
        self.per_instance
            .lock()
            .unwrap()
            .entry(id.to_string())
            .or_insert_with(|| Arc::new(Semaphore::new(limit)))
            .clone()
    }

    pub fn load_instance(&self, id: &str) -> Result<Option<Instance>, ApiError> {
        match self.store.instance_bytes(id).map_err(ApiError::internal)? {
            Some(bytes) => {
                let text = String::from_utf8(bytes).map_err(ApiError::internal)?;
                instance_from_json(&text).map(Some).map_err(ApiError::internal)
            }
            None => Ok(None),
        }
    }
}

/// Error response with a JSON body.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: serde_json::Value,
}

impl ApiError {
    fn new(status: StatusCode, message: impl std::fmt::Display) -> Self {
        Self {
            status,
            body: json!({ "error": message.to_string() }),
        }
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, format!("unknown {what} `{id}`"))
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        tracing::error!(error = %e, "internal error");
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/instances", post(submit_instance))
        .route("/instances/{id}", get(get_instance))
        .route("/instances/{id}/efficiency", post(post_efficiency))
        .route("/instances/{id}/diff/{other}", get(get_diff))
        .route("/plans", post(submit_plan))
        .route("/plans/{id}", get(get_plan))
        .route("/plans/{id}/result", get(get_result))
        .route("/plans/{id}/gantt.svg", get(get_gantt))
        .with_state(state)
}

/// Validates and stores an instance, returning its id and any warnings.
fn store_instance(state: &AppState, raw: &[u8], instance: &Instance) -> ApiResult<(String, Vec<crate::model::Diagnostic>)> {
    let diags = validate_instance(instance);
    if diags.iter().any(|d| d.is_error()) {
        return Err(ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            body: json!({ "error": "instance is invalid", "diagnostics": diags }),
        });
    }
    let canonical = instance_to_canonical_json(instance);
    let id = state.store.put_instance(raw, &canonical).map_err(ApiError::internal)?;
    Ok((id, diags))
}

async fn submit_instance(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<impl IntoResponse> {
    let text = std::str::from_utf8(&body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let instance = instance_from_json(text).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, e))?;
    let (id, warnings) = store_instance(&state, &body, &instance)?;
    Ok((StatusCode::CREATED, Json(json!({ "id": id, "warnings": warnings }))))
}

async fn get_instance(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    match state.store.instance_bytes(&id).map_err(ApiError::internal)? {
        Some(bytes) => Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response()),
        None => Err(ApiError::not_found("instance", &id)),
    }
}

async fn post_efficiency(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(patch): Json<EfficiencyPatch>,
) -> ApiResult<impl IntoResponse> {
    let base = state
        .load_instance(&id)?
        .ok_or_else(|| ApiError::not_found("instance", &id))?;
    let derived = patch_efficiency(&base, &patch).map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e))?;
    let raw = crate::model::format::instance_to_json(&derived);
    let (new_id, warnings) = store_instance(&state, raw.as_bytes(), &derived)?;
    let diff = diff_instances(&base, &derived);
    Ok((
        StatusCode::CREATED,
        Json(json!({ "id": new_id, "parent": id, "diff": diff, "warnings": warnings })),
    ))
}

async fn get_diff(State(state): State<Arc<AppState>>, Path((id, other)): Path<(String, String)>) -> ApiResult<impl IntoResponse> {
    let a = state.load_instance(&id)?.ok_or_else(|| ApiError::not_found("instance", &id))?;
    let b = state
        .load_instance(&other)?
        .ok_or_else(|| ApiError::not_found("instance", &other))?;
    Ok(Json(diff_instances(&a, &b)))
}

async fn submit_plan(State(state): State<Arc<AppState>>, Json(req): Json<PlanRequest>) -> ApiResult<impl IntoResponse> {
    let instance = state
        .load_instance(&req.instance)?
        .ok_or_else(|| ApiError::not_found("instance", &req.instance))?;
    let job = PlanJob::new(uuid::Uuid::new_v4().to_string(), req, &state.config, now_ms());
    state.persist(&job);
    state.jobs.lock().unwrap().insert(job.id.clone(), job.clone());
    spawn_job(state.clone(), instance, job.id.clone());
    Ok((StatusCode::ACCEPTED, Json(json!({ "id": job.id }))))
}

/// Waits for a slot on the instance and in the worker pool, then runs the
/// job on a blocking thread.
fn spawn_job(state: Arc<AppState>, instance: Instance, id: String) {
    tokio::spawn(async move {
        let job = state.job(&id).expect("job registered");
        let gate = state.instance_gate(&job.instance);
        let _own = gate.acquire_owned().await.expect("semaphore open");
        let _slot = state.workers.clone().acquire_owned().await.expect("semaphore open");
        state.transition(&id, JobState::Running, |j| j.started_at = Some(now_ms()));
        let st = state.clone();
        let run_id = id.clone();
        let outcome = tokio::task::spawn_blocking(move || {
            let mut observer = |c: &crate::improve::CheckpointRecord| {
                st.update(&run_id, |j| {
                    j.best = Some(c.best);
                    j.progress.push(c.clone());
                });
            };
            let out = execute(&instance, &job, &st.config, &mut observer);
            if let Ok(result) = &out {
                st.store.put_result(&run_id, result).map_err(|e| e.to_string())?;
            }
            out.map(|r| r.objective.total)
        })
        .await
        .unwrap_or_else(|e| Err(format!("worker panicked: {e}")));
        match outcome {
            Ok(total) => state.transition(&id, JobState::Done, |j| {
                j.best = Some(total);
                j.finished_at = Some(now_ms());
            }),
            Err(msg) => {
                tracing::warn!(job = %id, error = %msg, "plan job failed");
                state.transition(&id, JobState::Failed, |j| {
                    j.error = Some(msg);
                    j.finished_at = Some(now_ms());
                });
            }
        }
    });
}

async fn get_plan(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    state.job(&id).map(Json).ok_or_else(|| ApiError::not_found("plan", &id))
}

fn finished_result(state: &AppState, id: &str) -> ApiResult<PlanResult> {
    let job = state.job(id).ok_or_else(|| ApiError::not_found("plan", id))?;
    match job.state {
        JobState::Done => state
            .store
            .result(id)
            .map_err(ApiError::internal)?
            .ok_or_else(|| ApiError::internal(format!("result of {id} missing"))),
        JobState::Failed => Err(ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": "plan failed", "state": job.state, "detail": job.error }),
        }),
        _ => Err(ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": "plan not finished", "state": job.state, "best": job.best }),
        }),
    }
}

async fn get_result(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    finished_result(&state, &id).map(Json)
}

async fn get_gantt(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Response> {
    let r = finished_result(&state, &id)?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], r.gantt_svg).into_response())
}

/// Serves until Ctrl-C.
pub async fn serve(config: Config) -> crate::Result<()> {
    let listen = config.service.listen.clone();
    let state = AppState::open(config)?;
    let listener = tokio::net::TcpListener::bind(&listen).await?;
    tracing::info!(address = %listener.local_addr()?, "listening");
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
