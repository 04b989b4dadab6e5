use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heliplan"))
}

fn tiny() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/tiny.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn check_accepts_a_valid_instance() {
    let out = ok(&["check", "--instance", tiny().to_str().unwrap()]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "instance ok");
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    let inst = tiny();
    let inst = inst.to_str().unwrap();
    ok(&["construct", "--instance", inst, "--seed", "2", "--out", good.to_str().unwrap()]);
    ok(&["check", "--instance", inst, "--schedule", good.to_str().unwrap()]);

    // Keeping h1 at its start position all day leaves it off base.
    let mut doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&good).unwrap()).unwrap();
    let cells = doc["timeline"][0].as_array_mut().unwrap();
    let first = cells[0].clone();
    for c in cells.iter_mut() {
        *c = first.clone();
    }
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = run(&["check", "--instance", inst, "--schedule", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"constraint\""));

    let out = run(&["check", "--instance", "/no/such/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixed_seed_runs_are_byte_identical() {
    let inst = tiny();
    let inst = inst.to_str().unwrap();
    for args in [
        vec!["construct", "--instance", inst, "--seed", "5"],
        vec!["solve", "--algo", "sa", "--instance", inst, "--seed", "3", "--iterations", "500", "--checkpoints", "100,250"],
        vec!["solve", "--algo", "ils", "--instance", inst, "--seed", "3", "--iterations", "500"],
        vec!["generate", "--spec", "M2"],
    ] {
        let a = ok(&args);
        let b = ok(&args);
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}

#[test]
fn export_render_and_generate_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let inst = tiny();
    let inst = inst.to_str().unwrap();
    let lp = dir.path().join("tiny.lp");
    ok(&["export", "--instance", inst, "--out", lp.to_str().unwrap()]);
    let text = std::fs::read_to_string(&lp).unwrap();
    assert!(text.contains("Maximize") && text.trim_end().ends_with("End"));

    let sched = dir.path().join("s.json");
    ok(&["construct", "--instance", inst, "--out", sched.to_str().unwrap()]);
    let out = ok(&["render", "--instance", inst, "--schedule", sched.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("h1"));
    let svg = dir.path().join("s.svg");
    ok(&["render", "--instance", inst, "--schedule", sched.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let fi = dir.path().join("b12.json");
    let fs = dir.path().join("b12-schedule.json");
    ok(&["generate", "--spec", "b12-fixture", "--out", fi.to_str().unwrap(), "--schedule-out", fs.to_str().unwrap()]);
    let out = ok(&["check", "--instance", fi.to_str().unwrap(), "--schedule", fs.to_str().unwrap()]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("9.75"));
}

#[test]
fn bench_prints_a_table() {
    let out = ok(&["bench", "--specs", "S1", "--reps", "2", "--iterations", "100", "--checkpoints", "50"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("g+sa") && text.contains("g+ils"), "{text}");
}
