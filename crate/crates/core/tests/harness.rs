use qcongest::diameter::Algorithm;
use qcongest::graph::Family;
use qcongest::harness::{cmd_run, cmd_scaling, parse_rows, ExperimentConfig, CSV_HEADER};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        families: vec![Family::Cycle, Family::Random(0.2), Family::Lollipop],
        sizes: vec![10, 16],
        seeds: vec![3, 4, 5],
        ..ExperimentConfig::smoke()
    }
}

#[test]
fn tables_are_byte_identical_across_job_counts() {
    let mut c = small_config();
    let a = cmd_run(&c).unwrap();
    let again = cmd_run(&c).unwrap();
    c.jobs = 3;
    let b = cmd_run(&c).unwrap();
    assert_eq!(a.csv, again.csv);
    assert_eq!(a.csv, b.csv);
    assert_eq!(a.rows.len(), 3 * 2 * 3 * Algorithm::ALL.len());
    assert!(a.all_ok());
}

#[test]
fn seed_changes_random_graphs_only() {
    let mut c = small_config();
    c.families = vec![Family::Random(0.2)];
    let a = cmd_run(&c).unwrap();
    c.seed = 99;
    let b = cmd_run(&c).unwrap();
    assert_ne!(a.csv, b.csv);
}

#[test]
fn output_and_traces_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small_config();
    c.families = vec![Family::Random(0.2)];
    c.sizes = vec![8];
    c.seeds = vec![1];
    c.output = Some(dir.path().join("out.csv"));
    c.trace = Some(dir.path().join("traces"));
    let out = cmd_run(&c).unwrap();
    let written = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert_eq!(written, out.csv);
    assert!(written.starts_with(CSV_HEADER));
    assert_eq!(parse_rows(&written).unwrap(), out.rows);
    let trace = std::fs::read_to_string(dir.path().join("traces/random-0.2_8_1.jsonl")).unwrap();
    let first: serde_json::Value = serde_json::from_str(trace.lines().next().unwrap()).unwrap();
    assert_eq!(first["round"], 1);
}

#[test]
fn single_size_grid_has_undefined_slope() {
    let mut c = small_config();
    c.sizes = vec![12];
    let s = cmd_scaling(&cmd_run(&c).unwrap().csv).unwrap();
    assert!(s.fits.iter().all(|f| f.slope_n.is_none()));
    assert!(s.to_text().contains("undefined"));
}

#[test]
fn config_rejects_unknown_fields() {
    assert!(ExperimentConfig::from_json(r#"{"families": [], "sizes": [4], "seeds": [1], "algorithms": [], "bogus": 1}"#).is_err());
}
