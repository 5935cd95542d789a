//! End-to-end diameter algorithms: the simple and the final exact quantum
//! algorithms, and the 3/2-approximation.
//!
//! Each algorithm runs its classical parts in the engine, evaluates the
//! per-branch classical procedure on every candidate (the branch table), and
//! then runs the simulated quantum maximization over that table. Preparation
//! is separate from maximization so one table can serve many search seeds.

mod approx;
mod exact;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use approx::{approx_diameter, prepare_approx, sample_size_for, ApproxInfo, ApproxPrepared};
pub use exact::{exact_diameter, exact_diameter_simple, prepare_exact, prepare_simple, BranchTable};

use crate::engine::{bandwidth_for, CostReport};
use crate::graph::{Dist, GraphError, NodeId};
use crate::par::Exec;
use crate::procedures::ProcedureError;
use crate::quantum::{CallCosts, SearchCost, SearchError};

#[derive(Debug, thiserror::Error)]
pub enum DiameterError {
    #[error(transparent)]
    Procedure(#[from] ProcedureError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("sampling failed: {0}")]
    Sampling(String),
}

impl From<crate::engine::EngineError> for DiameterError {
    fn from(e: crate::engine::EngineError) -> Self {
        DiameterError::Procedure(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Simple,
    Approx,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Exact, Algorithm::Simple, Algorithm::Approx];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Simple => "simple",
            Algorithm::Approx => "approx",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected exact, simple or approx)"))
    }
}

#[derive(Clone, Debug)]
pub struct DiameterConfig {
    /// Failure probability of the search; `None` means `1/n²`.
    pub delta: Option<f64>,
    pub bw_constant: u32,
    pub seed: u64,
    /// Execution mode of the branch table.
    pub exec: Exec,
    pub max_phases: u64,
}

impl Default for DiameterConfig {
    fn default() -> Self {
        DiameterConfig { delta: None, bw_constant: 4, seed: 0, exec: Exec::default(), max_phases: 10_000 }
    }
}

impl DiameterConfig {
    pub fn with_seed(seed: u64) -> Self {
        DiameterConfig { seed, ..Default::default() }
    }

    pub fn delta_for(&self, n: usize) -> f64 {
        self.delta.unwrap_or(1.0 / (n as f64 * n as f64))
    }

    pub fn bandwidth(&self, n: usize) -> u32 {
        bandwidth_for(n, self.bw_constant)
    }
}

#[derive(Clone, Debug)]
pub struct DiameterRun {
    pub algo: Algorithm,
    pub d_out: Dist,
    pub cost: CostReport,
    pub search: SearchCost,
    pub calls: CallCosts,
    pub x_best: NodeId,
    /// Largest forward-plus-reversal round count of one evaluation call.
    pub eval_rounds: u64,
    pub approx: Option<ApproxInfo>,
}

impl DiameterRun {
    pub fn leader_qubits(&self) -> u64 {
        self.search.leader_qubits_peak
    }

    pub fn words(&self) -> u64 {
        self.cost.total_words
    }

    fn trivial(algo: Algorithm) -> Self {
        DiameterRun {
            algo,
            d_out: 0,
            cost: CostReport { leader: Some(0), ..CostReport::empty(1) },
            search: SearchCost::default(),
            calls: CallCosts { t0: 0, t_setup: 0, t_eval: 0, node_qubits: 0, leader: 0, domain: 1, epsilon: 1.0 },
            x_best: 0,
            eval_rounds: 0,
            approx: None,
        }
    }
}

/// Runs `algo` on `g` with `config`.
pub fn run_algorithm(algo: Algorithm, g: &crate::graph::Graph, config: &DiameterConfig) -> Result<DiameterRun, DiameterError> {
    match algo {
        Algorithm::Exact => exact_diameter(g, config),
        Algorithm::Simple => exact_diameter_simple(g, config),
        Algorithm::Approx => approx_diameter(g, config),
    }
}

/// `⌈3x/2⌉`.
pub fn three_halves_ceil(x: Dist) -> Dist {
    (3 * x).div_ceil(2)
}
