use crate::engine::CostReport;
use crate::graph::NodeId;

use super::search::{ceil_log2_f, SearchCost};

/// Per-call round costs and memory footprint registered by a distributed
/// search.
#[derive(Clone, Copy, Debug)]
pub struct CallCosts {
    /// Classical initialization before the first Setup call.
    pub t0: u64,
    pub t_setup: u64,
    pub t_eval: u64,
    /// Qubits per node used by one Setup + Evaluation pass.
    pub node_qubits: u64,
    pub leader: NodeId,
    /// Number of candidates `|X|`.
    pub domain: usize,
    pub epsilon: f64,
}

impl CallCosts {
    /// Rounds of one call of either kind; branches share rounds.
    pub fn per_call(&self) -> u64 {
        self.t_setup.max(self.t_eval)
    }

    /// Copies of the index register kept at the leader.
    pub fn log_factor(&self) -> u64 {
        ceil_log2_f(1.0 / self.epsilon).max(1)
    }

    pub fn leader_qubits(&self) -> u64 {
        let index_bits = ceil_log2_f(self.domain.max(1) as f64);
        (self.node_qubits + index_bits) * self.log_factor()
    }
}

/// Network cost of a search: `T0 + calls · max(T_setup, T_eval)` rounds.
/// Fills `rounds_charged` and the qubit peaks of `calls`.
pub fn distributed_cost(costs: &CallCosts, calls: &mut SearchCost, n: usize) -> CostReport {
    calls.rounds_charged = costs.t0 + calls.calls() * costs.per_call();
    calls.leader_qubits_peak = costs.leader_qubits();
    calls.node_qubits_peak = costs.node_qubits;
    let mut report = CostReport::empty(n);
    report.rounds = calls.rounds_charged;
    report.per_node_peak_qubits = vec![costs.node_qubits; n];
    if costs.leader < n {
        report.per_node_peak_qubits[costs.leader] = calls.leader_qubits_peak;
    }
    report.leader = Some(costs.leader);
    report
}
