//! Drives the HTTP planning service in process: submit an instance, start a
//! plan, poll it and fetch the result.
//!
//! cargo run --example planning_service

use axum::body::Body;
use axum::http::Request;
use heliplan::config::Config;
use heliplan::service::{router, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: String) -> Value {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let resp = app.clone().oneshot(req.body(Body::from(body)).unwrap()).await.unwrap();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main]
async fn main() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = Config::default();
    config.service.data_dir = dir.path().to_path_buf();
    let app = router(AppState::open(config).unwrap());

    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/tiny.json")).unwrap();
    let id = call(&app, "POST", "/instances", text).await["id"].as_str().unwrap().to_string();
    println!("instance {id}");

    let req = json!({ "instance": id, "algorithm": "ils", "budget": { "iterations": 2000 }, "seed": 1 });
    let plan = call(&app, "POST", "/plans", req.to_string()).await["id"].as_str().unwrap().to_string();
    loop {
        let job = call(&app, "GET", &format!("/plans/{plan}"), String::new()).await;
        println!("plan {plan}: {}", job["state"]);
        if job["state"] == "done" || job["state"] == "failed" {
            break;
        }
        tokio::time::sleep(std::time::Duration::from_millis(50)).await;
    }
    let result = call(&app, "GET", &format!("/plans/{plan}/result"), String::new()).await;
    println!("objective {}", result["objective"]["total"]);
    println!("summary {}", result["summary"]);
}
