//! Experiment driver: runs algorithm grids, writes result tables, fits
//! scaling exponents and runs the invariant suite.
//!
//! Seeds: the task for listed seed `s` builds its graph from
//! `derive(root, s)` and runs algorithm number `a` (in `Algorithm::ALL`
//! order) with `derive(derive(root, s), 1 + a)`. Nothing depends on the
//! order in which tasks finish.

mod gadget;
mod scaling;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use gadget::{cmd_gadget, GadgetInputs, GadgetReport, GadgetRequest};
pub use scaling::{cmd_scaling, fit_slope, parse_rows, ScalingFit, ScalingSummary};
pub use verify::{cmd_verify, Check, VerifyReport};

use crate::diameter::{run_algorithm, three_halves_ceil, Algorithm, DiameterConfig, DiameterError};
use crate::engine::write_trace;
use crate::graph::{diameter_bruteforce, generate, Dist, Family, GraphError};
use crate::par::{self, Exec};
use crate::procedures::{initialize, ProcedureError};
use crate::seed::derive;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Diameter(#[from] DiameterError),
    #[error(transparent)]
    Procedure(#[from] ProcedureError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io { path: path.to_path_buf(), source }
}

fn default_bw() -> u32 {
    4
}

fn default_jobs() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    /// `None` means `1/n²`.
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default = "default_bw")]
    pub bw_constant: u32,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub seed: u64,
    /// Directory for per-task initialization traces.
    #[serde(default)]
    pub trace: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let c: ExperimentConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 3) {
            return Err(HarnessError::Config(format!("size {n} below 3")));
        }
        if self.seeds.is_empty() {
            return Err(HarnessError::Config("seeds must be non-empty".into()));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(HarnessError::Config(format!("delta {d} outside (0, 1)")));
            }
        }
        if self.bw_constant == 0 {
            return Err(HarnessError::Config("bw_constant must be positive".into()));
        }
        Ok(())
    }

    /// A small smoke grid.
    pub fn smoke() -> Self {
        ExperimentConfig {
            families: vec![Family::Path, Family::Cycle, Family::Random(0.2)],
            sizes: vec![8, 16, 32],
            seeds: (0..5).collect(),
            algorithms: Algorithm::ALL.to_vec(),
            delta: None,
            bw_constant: 4,
            output: None,
            jobs: 1,
            seed: 0,
            trace: None,
        }
    }
}

/// One result line; the field order is the table's column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub family: String,
    pub n: usize,
    #[serde(rename = "D_true")]
    pub d_true: Dist,
    pub algo: Algorithm,
    #[serde(rename = "D_out")]
    pub d_out: Dist,
    pub rounds: u64,
    pub words: u64,
    pub leader_qubits: u64,
    pub seed: u64,
    pub ok: bool,
    pub setup_calls: u64,
    pub eval_calls: u64,
    pub inverse_calls: u64,
}

/// Whether `d_out` is a correct answer of `algo` for true diameter `d`.
pub fn outcome_ok(algo: Algorithm, d: Dist, d_out: Dist) -> bool {
    match algo {
        Algorithm::Exact | Algorithm::Simple => d_out == d,
        Algorithm::Approx => d_out <= d && d <= three_halves_ceil(d_out),
    }
}

#[derive(Clone, Debug)]
struct Task {
    family: Family,
    n: usize,
    seed: u64,
}

fn tasks(config: &ExperimentConfig) -> Vec<Task> {
    let mut out = Vec::new();
    for &family in &config.families {
        for &n in &config.sizes {
            for &seed in &config.seeds {
                out.push(Task { family, n, seed });
            }
        }
    }
    out
}

fn trace_name(t: &Task) -> String {
    format!("{}_{}_{}.jsonl", t.family.to_string().replace(':', "-"), t.n, t.seed)
}

fn run_task(config: &ExperimentConfig, task: &Task) -> Result<Vec<Row>, HarnessError> {
    let graph_seed = derive(config.seed, task.seed);
    let g = generate(task.family, task.n, graph_seed)?;
    let d_true = diameter_bruteforce(&g)?;
    if let Some(dir) = &config.trace {
        let init = initialize(&g, crate::engine::bandwidth_for(g.n(), config.bw_constant), true)?;
        let path = dir.join(trace_name(task));
        let file = fs::File::create(&path).map_err(io_err(&path))?;
        write_trace(&init.trace, std::io::BufWriter::new(file)).map_err(io_err(&path))?;
    }
    let mut rows = Vec::new();
    for (a, algo) in Algorithm::ALL.into_iter().enumerate() {
        if !config.algorithms.contains(&algo) {
            continue;
        }
        let dcfg = DiameterConfig {
            delta: config.delta,
            bw_constant: config.bw_constant,
            seed: derive(graph_seed, 1 + a as u64),
            exec: Exec::Sequential,
            ..Default::default()
        };
        let run = run_algorithm(algo, &g, &dcfg)?;
        rows.push(Row {
            family: task.family.to_string(),
            n: task.n,
            d_true,
            algo,
            d_out: run.d_out,
            rounds: run.cost.rounds,
            words: run.words(),
            leader_qubits: run.leader_qubits(),
            seed: task.seed,
            ok: outcome_ok(algo, d_true, run.d_out),
            setup_calls: run.search.setup_calls,
            eval_calls: run.search.eval_calls,
            inverse_calls: run.search.inverse_calls,
        });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub rows: Vec<Row>,
    pub csv: String,
}

impl RunOutput {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

pub const CSV_HEADER: &str =
    "family,n,D_true,algo,D_out,rounds,words,leader_qubits,seed,ok,setup_calls,eval_calls,inverse_calls";

pub fn rows_to_csv(rows: &[Row]) -> Result<String, HarnessError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| HarnessError::Csv(e.into_error().into()))?)
        .expect("csv output is utf-8");
    Ok(format!("{CSV_HEADER}\n{body}"))
}

/// Runs every (family, size, seed, algorithm) combination of `config`.
/// Writes the table to `config.output` when set.
pub fn cmd_run(config: &ExperimentConfig) -> Result<RunOutput, HarnessError> {
    config.validate()?;
    if let Some(dir) = &config.trace {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let tasks = tasks(config);
    let results = par::map_with_jobs(config.jobs, tasks.len(), |i| run_task(config, &tasks[i]));
    let mut rows = Vec::new();
    for r in results {
        rows.extend(r?);
    }
    let csv = rows_to_csv(&rows)?;
    if let Some(path) = &config.output {
        fs::write(path, &csv).map_err(io_err(path))?;
    }
    Ok(RunOutput { rows, csv })
}

/// `x` with 6 significant digits, as every float in the reports.
pub fn fmt_float(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = 6 - 1 - x.abs().log10().floor() as i32;
    if (0..=15).contains(&digits) {
        let s = format!("{:.*}", digits as usize, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format() {
        assert_eq!(fmt_float(1.0), "1");
        assert_eq!(fmt_float(1.23456789), "1.23457");
        assert_eq!(fmt_float(1234.5678), "1234.57");
        assert_eq!(fmt_float(0.000123456789), "0.000123457");
        assert_eq!(fmt_float(0.0), "0");
    }

    #[test]
    fn config_parsing() {
        let c = ExperimentConfig::from_json(
            r#"{"families": ["path", "random:0.05"], "sizes": [8], "seeds": [1, 2], "algorithms": ["exact"], "delta": null}"#,
        )
        .unwrap();
        assert_eq!(c.families, vec![Family::Path, Family::Random(0.05)]);
        assert_eq!((c.bw_constant, c.jobs), (4, 1));
        assert!(ExperimentConfig::from_json(r#"{"families": [], "sizes": [2], "seeds": [1], "algorithms": []}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"families": [], "sizes": [4], "seeds": [], "algorithms": []}"#).is_err());
    }

    #[test]
    fn empty_algorithms_give_header_only() {
        let mut c = ExperimentConfig::smoke();
        c.algorithms.clear();
        let out = cmd_run(&c).unwrap();
        assert_eq!(out.csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn approx_outcome_rule() {
        assert!(outcome_ok(Algorithm::Approx, 3, 2));
        assert!(!outcome_ok(Algorithm::Approx, 4, 2));
        assert!(!outcome_ok(Algorithm::Approx, 3, 4));
    }
}
