use std::process::Command;

fn qcongest(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qcongest")).args(args).output().unwrap()
}

#[test]
fn verify_passes() {
    let out = qcongest(&["verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("9/9 properties hold"));
}

#[test]
fn run_is_deterministic_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"families": ["cycle", "random:0.2"], "sizes": [8, 12], "seeds": [0, 1], "algorithms": ["exact", "approx"]}"#)
        .unwrap();
    let a = qcongest(&["run", "--config", config.to_str().unwrap(), "--jobs", "1", "--seed", "5"]);
    let b = qcongest(&["run", "--config", config.to_str().unwrap(), "--jobs", "4", "--seed", "5"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let csv = dir.path().join("out.csv");
    let c = qcongest(&["run", "--config", config.to_str().unwrap(), "--seed", "5", "--out", csv.to_str().unwrap()]);
    assert!(c.status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), a.stdout);
    let s = qcongest(&["scaling", csv.to_str().unwrap()]);
    assert!(s.status.success());
    assert!(String::from_utf8_lossy(&s.stdout).starts_with("family,algo,sizes"));
}

#[test]
fn gadget_reports_verdict_and_exports_edges() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("g.txt");
    let out = qcongest(&["gadget", "--n", "10", "--d", "1", "--x", "0110", "--y", "0100", "--edges", edges.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("DISJ=0 delta=3"), "{text}");
    let g = qcongest::graph::parse_edge_list(&std::fs::read_to_string(&edges).unwrap()).unwrap();
    assert_eq!(g.n(), 15);
}

#[test]
fn bad_arguments_fail() {
    assert_eq!(qcongest(&["gadget", "--n", "12", "--random", "1"]).status.code(), Some(2));
    assert_eq!(qcongest(&["gadget", "--n", "10", "--x", "01", "--y", "10"]).status.code(), Some(2));
    assert!(!qcongest(&["run", "--delta", "2"]).status.success());
}

#[test]
fn schedule_dump_is_json() {
    let out = qcongest(&["schedule", "--r", "9", "--d", "2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["messages"].as_array().unwrap().len(), 6);
}
