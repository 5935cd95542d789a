//! Classical CONGEST subroutines: leader election, BFS construction, the
//! DFS numbering oracle, and the per-branch evaluation procedures the
//! quantum search runs in superposition.

mod bfs;
mod dfs;
mod election;
mod evaluation;
mod simple;
mod support;

pub use bfs::{build_bfs_tree, link_children, BfsTreeState, TreeLinks};
pub use dfs::{dfs_numbering, set_s, DfsNumbering, RootedTree};
pub use election::{elect_leader_and_ecc, Election};
pub use evaluation::{evaluation_procedure, EvalNodeState, EvalOutcome, EvalTree, EvaluationProgram};
pub use simple::{eccentricity_simple_eval, SimpleEvalProgram};
pub use support::{
    broadcast_index, multi_source_bfs, tree_aggregate, Aggregate, BroadcastProgram, NearestSource,
};

use crate::engine::{bits_for, CostReport, EngineError, RunConfig, TraceEvent};
use crate::graph::{Graph, GraphError};

#[derive(Debug, thiserror::Error)]
pub enum ProcedureError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Field widths shared by the procedures of one network size.
#[derive(Clone, Copy, Debug)]
pub struct Widths {
    pub id: u32,
    /// An id or "none", stored as `id + 1`.
    pub opt_id: u32,
    pub dist: u32,
    pub count: u32,
}

impl Widths {
    pub fn new(n: usize) -> Self {
        let top = n.saturating_sub(1) as u64;
        Widths {
            id: bits_for(top),
            opt_id: bits_for(top + 1),
            dist: bits_for(top),
            count: bits_for(n as u64),
        }
    }
}

pub(crate) fn encode_opt(x: Option<usize>) -> u64 {
    x.map_or(0, |v| v as u64 + 1)
}

pub(crate) fn decode_opt(x: u64) -> Option<usize> {
    x.checked_sub(1).map(|v| v as usize)
}

/// Generous per-procedure round limit; every procedure here finishes in O(n).
pub(crate) fn run_config(n: usize, bandwidth: u32, factor: u64) -> RunConfig {
    RunConfig::new(bandwidth, factor * (n as u64 + 2) + 16)
}

/// Classical initialization shared by the exact algorithms: leader election,
/// BFS(leader) and the child/sibling links of the whole tree.
#[derive(Clone, Debug)]
pub struct Initialization {
    pub election: Election,
    pub tree: BfsTreeState,
    pub links: Vec<TreeLinks>,
    pub cost: CostReport,
    /// Deliveries of all three procedures on one round axis; empty unless
    /// requested.
    pub trace: Vec<TraceEvent>,
}

pub fn initialize(g: &Graph, bandwidth: u32, trace: bool) -> Result<Initialization, ProcedureError> {
    let (election, mut cost, mut events) = election::elect_traced(g, bandwidth, trace)?;
    let (tree, c, t) = bfs::bfs_traced(g, election.leader, bandwidth, trace)?;
    if tree.ecc_leader != election.ecc_leader {
        return Err(ProcedureError::Invariant("election and BFS disagree on ecc(leader)".into()));
    }
    append_shifted(&mut events, t, cost.rounds);
    cost.then(&c);
    let (links, c, t) = bfs::link_traced(g, &tree, &vec![true; g.n()], bandwidth, trace)?;
    append_shifted(&mut events, t, cost.rounds);
    cost.then(&c);
    cost.leader = Some(election.leader);
    Ok(Initialization { election, tree, links, cost, trace: events })
}

fn append_shifted(events: &mut Vec<TraceEvent>, more: Vec<TraceEvent>, offset: u64) {
    events.extend(more.into_iter().map(|mut e| {
        e.round += offset;
        e
    }));
}
