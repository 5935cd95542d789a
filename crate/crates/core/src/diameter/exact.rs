use crate::engine::CostReport;
use crate::graph::{Dist, Graph, NodeId};
use crate::par::{self, Exec};
use crate::procedures::{
    broadcast_index, eccentricity_simple_eval, evaluation_procedure, initialize, EvalTree, ProcedureError, TreeLinks,
};
use crate::quantum::{distributed_cost, quantum_maximize, setup_subset, CallCosts, QOptConfig};
use crate::seed;

use super::{Algorithm, DiameterConfig, DiameterError, DiameterRun};

/// Classical results of every branch of one search, plus the per-call costs
/// the distributed cost model charges.
#[derive(Clone, Debug)]
pub struct BranchTable {
    pub n: usize,
    pub root: NodeId,
    pub d: Dist,
    /// Candidate indices, ascending.
    pub support: Vec<NodeId>,
    /// `f(x)` for each entry of `support`.
    pub values: Vec<Dist>,
    pub epsilon: f64,
    /// Classical work before the first Setup call.
    pub t0_cost: CostReport,
    pub t_setup: u64,
    pub t_eval: u64,
    pub setup_words: u64,
    pub eval_words: u64,
    /// Peak register bits of any node during one Setup or Evaluation call.
    pub node_bits: u64,
    pub peak_bits: Vec<u64>,
}

pub(super) struct TableSpec<'a> {
    pub root: NodeId,
    pub d: Dist,
    pub links: &'a [TreeLinks],
    pub support: Vec<NodeId>,
    pub epsilon: f64,
    pub t0_cost: CostReport,
}

pub(super) fn build_table<F>(g: &Graph, spec: TableSpec<'_>, bandwidth: u32, exec: Exec, eval: F) -> Result<BranchTable, DiameterError>
where
    F: Fn(NodeId) -> Result<(Dist, CostReport), ProcedureError> + Sync + Send,
{
    let n = g.n();
    let setup = broadcast_index(g, spec.root, spec.links, spec.support[0], bandwidth)?;
    let branches = par::try_map_indexed(exec, spec.support.len(), |i| eval(spec.support[i]))?;
    let mut peak_bits = spec.t0_cost.per_node_peak_bits.clone();
    let mut node_bits = setup.max_peak_bits();
    let (mut t_eval, mut eval_words) = (0, 0);
    for (_, c) in &branches {
        t_eval = t_eval.max(c.rounds);
        eval_words = eval_words.max(c.total_words);
        node_bits = node_bits.max(c.max_peak_bits());
        for (p, &b) in peak_bits.iter_mut().zip(&c.per_node_peak_bits) {
            *p = (*p).max(b);
        }
    }
    for (p, &b) in peak_bits.iter_mut().zip(&setup.per_node_peak_bits) {
        *p = (*p).max(b);
    }
    Ok(BranchTable {
        n,
        root: spec.root,
        d: spec.d,
        support: spec.support,
        values: branches.into_iter().map(|(v, _)| v).collect(),
        epsilon: spec.epsilon,
        t0_cost: spec.t0_cost,
        t_setup: setup.rounds,
        t_eval,
        setup_words: setup.total_words,
        eval_words,
        node_bits,
        peak_bits,
    })
}

impl BranchTable {
    pub fn value_of(&self, x: NodeId) -> Option<Dist> {
        self.support.binary_search(&x).ok().map(|i| self.values[i])
    }

    pub fn max_value(&self) -> Dist {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn call_costs(&self) -> CallCosts {
        CallCosts {
            t0: self.t0_cost.rounds,
            t_setup: self.t_setup,
            t_eval: self.t_eval,
            node_qubits: self.node_bits,
            leader: self.root,
            domain: self.n,
            epsilon: self.epsilon,
        }
    }

    /// Simulated quantum maximization over the table with search seed `seed`.
    pub fn maximize(&self, algo: Algorithm, delta: f64, seed: u64, max_phases: u64, exec: Exec) -> Result<DiameterRun, DiameterError> {
        let setup = setup_subset(self.n, &self.support)?.with_exec(exec);
        let mut values = vec![0u64; self.n];
        for (&x, &v) in self.support.iter().zip(&self.values) {
            values[x] = v as u64;
        }
        let mut qcfg = QOptConfig::new(self.epsilon, delta, seed);
        qcfg.max_phases = max_phases;
        let (x_best, mut search) = quantum_maximize(|x| values[x], &setup, &qcfg)?;
        let calls = self.call_costs();
        let mut cost = distributed_cost(&calls, &mut search, self.n);
        cost.total_words = self.t0_cost.total_words + search.calls() * self.setup_words.max(self.eval_words);
        cost.per_node_peak_bits = self.peak_bits.clone();
        Ok(DiameterRun {
            algo,
            d_out: values[x_best] as Dist,
            cost,
            search,
            calls,
            x_best,
            eval_rounds: self.t_eval,
            approx: None,
        })
    }
}

fn prepare(g: &Graph, config: &DiameterConfig, simple: bool) -> Result<BranchTable, DiameterError> {
    g.require_connected()?;
    let n = g.n();
    let bw = config.bandwidth(n);
    let init = initialize(g, bw, false)?;
    let root = init.election.leader;
    let d = init.election.ecc_leader;
    let tree = EvalTree::new(root, d, init.links);
    let epsilon = if simple { 1.0 / n as f64 } else { d as f64 / (2.0 * n as f64) };
    let spec = TableSpec { root, d, links: &tree.links, support: (0..n).collect(), epsilon, t0_cost: init.cost };
    if simple {
        build_table(g, spec, bw, config.exec, |u0| eccentricity_simple_eval(g, &tree, u0, bw))
    } else {
        build_table(g, spec, bw, config.exec, |u0| evaluation_procedure(g, &tree, u0, bw).map(|o| (o.value, o.cost)))
    }
}

/// Branch table of the final exact algorithm: `f(u0) = max ecc` over the DFS
/// window `S(u0)`, with `ε = d/2n`.
pub fn prepare_exact(g: &Graph, config: &DiameterConfig) -> Result<BranchTable, DiameterError> {
    prepare(g, config, false)
}

/// Branch table of the simple algorithm: `f(u0) = ecc(u0)`, with `ε = 1/n`.
pub fn prepare_simple(g: &Graph, config: &DiameterConfig) -> Result<BranchTable, DiameterError> {
    prepare(g, config, true)
}

fn search_seed(config: &DiameterConfig) -> u64 {
    seed::derive(config.seed, 1)
}

pub fn exact_diameter(g: &Graph, config: &DiameterConfig) -> Result<DiameterRun, DiameterError> {
    if g.n() == 1 {
        return Ok(DiameterRun::trivial(Algorithm::Exact));
    }
    let table = prepare_exact(g, config)?;
    table.maximize(Algorithm::Exact, config.delta_for(g.n()), search_seed(config), config.max_phases, config.exec)
}

pub fn exact_diameter_simple(g: &Graph, config: &DiameterConfig) -> Result<DiameterRun, DiameterError> {
    if g.n() == 1 {
        return Ok(DiameterRun::trivial(Algorithm::Simple));
    }
    let table = prepare_simple(g, config)?;
    table.maximize(Algorithm::Simple, config.delta_for(g.n()), search_seed(config), config.max_phases, config.exec)
}
