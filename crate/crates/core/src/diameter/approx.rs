use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{bits_for, CostReport};
use crate::graph::{eccentricity, Dist, Graph, NodeId};
use crate::par;
use crate::procedures::{
    build_bfs_tree, evaluation_procedure, initialize, link_children, multi_source_bfs, tree_aggregate, Aggregate, EvalTree,
};
use crate::seed;

use super::exact::{build_table, BranchTable, TableSpec};
use super::{Algorithm, DiameterConfig, DiameterError, DiameterRun};

pub const MAX_SAMPLE_ATTEMPTS: u32 = 20;

#[derive(Clone, Debug, Serialize)]
pub struct ApproxInfo {
    pub s: usize,
    pub sample_size: usize,
    pub attempts: u32,
    pub w: NodeId,
    pub ecc_w: Dist,
    pub r_size: usize,
    /// Largest eccentricity among the sampled nodes.
    pub ecc_sample: Dist,
}

/// `⌈n^{2/3}·max(1,d)^{−1/3}⌉` clamped to `[1, n]`.
pub fn sample_size_for(n: usize, d: Dist) -> usize {
    let s = ((n as f64).powf(2.0 / 3.0) / (d.max(1) as f64).cbrt()).ceil() as usize;
    s.clamp(1, n.max(1))
}

#[derive(Clone, Debug)]
pub struct ApproxPrepared {
    pub info: ApproxInfo,
    /// Branch table over `R`; `None` when `R` is the single node `w`.
    pub table: Option<BranchTable>,
    pub classical: CostReport,
}

/// Classical part of the approximation: sample `S`, find `w`, select `R`
/// and tabulate the evaluation over `R`.
pub fn prepare_approx(g: &Graph, config: &DiameterConfig) -> Result<ApproxPrepared, DiameterError> {
    g.require_connected()?;
    let n = g.n();
    let bw = config.bandwidth(n);
    let init = initialize(g, bw, false)?;
    let d0 = init.election.ecc_leader;
    let mut cost = init.cost.clone();

    let s = sample_size_for(n, d0);
    let log_n = (n as f64).log2();
    let p = (log_n / s as f64).min(1.0);
    let limit = n as f64 * log_n * log_n / s as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, 0));
    let mut attempts = 0;
    let in_s = loop {
        if attempts == MAX_SAMPLE_ATTEMPTS {
            return Err(DiameterError::Sampling(format!("{attempts} samples were empty or larger than {limit:.1}")));
        }
        attempts += 1;
        let in_s: Vec<bool> = (0..n).map(|_| rng.gen_bool(p)).collect();
        let ones: Vec<u64> = in_s.iter().map(|&b| b as u64).collect();
        let (count, c) = tree_aggregate(g, &init.links, d0, &ones, bits_for(n as u64), Aggregate::Sum, bw)?;
        cost.then(&c);
        if count > 0 && count as f64 <= limit {
            break in_s;
        }
    };
    let sample: Vec<NodeId> = (0..n).filter(|&v| in_s[v]).collect();

    let (near, c) = multi_source_bfs(g, &in_s, bw)?;
    cost.then(&c);
    let keys: Vec<u64> = (0..n).map(|v| near[v].dist as u64 * n as u64 + (n - 1 - v) as u64).collect();
    let (key, c) = tree_aggregate(g, &init.links, d0, &keys, bits_for((n * n) as u64), Aggregate::Max, bw)?;
    cost.then(&c);
    let w = n - 1 - (key % n as u64) as usize;

    let (tree_w, c) = build_bfs_tree(g, w, bw)?;
    cost.then(&c);
    let mut order: Vec<NodeId> = (0..n).collect();
    order.sort_by_key(|&v| (tree_w.dist[v], v));
    let mut in_r = vec![false; n];
    for &v in &order[..s] {
        in_r[v] = true;
    }
    let (links_r, c) = link_children(g, &tree_w, &in_r, bw)?;
    cost.then(&c);
    let dists: Vec<u64> = tree_w.dist.iter().map(|&x| x as u64).collect();
    let (ecc_w, c) = tree_aggregate(g, &links_r, tree_w.ecc_leader, &dists, bits_for(n as u64), Aggregate::Max, bw)?;
    cost.then(&c);
    let ecc_w = ecc_w as Dist;
    // Selecting the s closest nodes to w: a threshold search by aggregation
    // over BFS(w), charged as one convergecast and broadcast.
    cost.rounds += 2 * ecc_w as u64;
    cost.total_words += 2 * (n as u64 - 1);

    let eccs = par::try_map_indexed(config.exec, sample.len(), |i| eccentricity(g, sample[i]))?;
    let ecc_sample = eccs.iter().copied().max().unwrap_or(0);
    // Pipelined BFS from every node of S.
    cost.rounds += sample.len() as u64 + 2 * d0 as u64;
    cost.total_words += sample.len() as u64 * 2 * g.m() as u64;

    let info = ApproxInfo { s, sample_size: sample.len(), attempts, w, ecc_w, r_size: s, ecc_sample };
    let support: Vec<NodeId> = (0..n).filter(|&v| in_r[v]).collect();
    if support.len() == 1 {
        return Ok(ApproxPrepared { info, table: None, classical: cost });
    }
    let tree = EvalTree::new(w, ecc_w, links_r);
    let epsilon = (ecc_w as f64 / (2.0 * support.len() as f64)).min(1.0);
    let spec = TableSpec { root: w, d: ecc_w, links: &tree.links, support, epsilon, t0_cost: cost.clone() };
    let table = build_table(g, spec, bw, config.exec, |u0| evaluation_procedure(g, &tree, u0, bw).map(|o| (o.value, o.cost)))?;
    Ok(ApproxPrepared { info, table: Some(table), classical: cost })
}

impl ApproxPrepared {
    pub fn maximize(&self, delta: f64, seed: u64, max_phases: u64, exec: par::Exec) -> Result<DiameterRun, DiameterError> {
        let mut run = match &self.table {
            Some(t) => t.maximize(Algorithm::Approx, delta, seed, max_phases, exec)?,
            None => {
                let mut run = DiameterRun::trivial(Algorithm::Approx);
                run.cost = self.classical.clone();
                run.x_best = self.info.w;
                run.calls.leader = self.info.w;
                run.calls.t0 = self.classical.rounds;
                run
            }
        };
        run.d_out = run.d_out.max(self.info.ecc_w).max(self.info.ecc_sample);
        run.approx = Some(self.info.clone());
        Ok(run)
    }
}

/// Returns `D̄` with `D̄ ≤ D`, and `D ≤ ⌈3D̄/2⌉` with high probability.
pub fn approx_diameter(g: &Graph, config: &DiameterConfig) -> Result<DiameterRun, DiameterError> {
    if g.n() == 1 {
        return Ok(DiameterRun::trivial(Algorithm::Approx));
    }
    let prep = prepare_approx(g, config)?;
    prep.maximize(config.delta_for(g.n()), seed::derive(config.seed, 1), config.max_phases, config.exec)
}
