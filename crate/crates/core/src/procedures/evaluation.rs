//! Pipelined evaluation of `f(u0) = max over S(u0) of ecc(v)`.
//!
//! One program runs three timed stages on a shared round counter, so every
//! branch `u0` follows the same schedule:
//!
//! * rounds `0..=2d`: a token walks the tree from `u0` for `2d` steps;
//!   nodes record their first-visit offset `τ′`.
//! * rounds `2d..=8d`: every visited node starts a BFS wave `(τ′, 0)` at local
//!   round `2τ′`. Nodes keep only the newest wave type they have seen.
//! * rounds `8d..=9d`: the largest distance seen is convergecast to the root.
//!
//! The reversal that uncomputes the scratch registers is charged as a mirror
//! of the forward rounds.

use crate::engine::{self, bits_for, CostReport, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, Status, Word};
use crate::graph::{Dist, Graph, NodeId};

use super::{decode_opt, dfs_numbering, encode_opt, run_config, set_s, DfsNumbering, ProcedureError, RootedTree, TreeLinks, Widths};

/// The registers of one node used by the Step 2 waves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalNodeState {
    pub t_v: i64,
    pub d_v: Dist,
    pub tau_prime: Option<u32>,
    pub in_s: bool,
}

impl Default for EvalNodeState {
    fn default() -> Self {
        EvalNodeState { t_v: -1, d_v: 0, tau_prime: None, in_s: false }
    }
}

/// Tree data shared by all branches of one search.
#[derive(Clone, Debug)]
pub struct EvalTree {
    pub root: NodeId,
    pub d: Dist,
    pub links: Vec<TreeLinks>,
    pub numbering: DfsNumbering,
}

impl EvalTree {
    pub fn new(root: NodeId, d: Dist, links: Vec<TreeLinks>) -> Self {
        let numbering = dfs_numbering(&RootedTree::from_links(root, &links));
        EvalTree { root, d, links, numbering }
    }

    pub fn members(&self) -> Vec<NodeId> {
        (0..self.links.len()).filter(|&v| self.links[v].member).collect()
    }
}

pub struct EvaluationProgram {
    d: u64,
    u0: NodeId,
    root: NodeId,
    w: Widths,
    tau_bits: u32,
    round_bits: u32,
    stride: u64,
}

pub struct EvalState {
    links: TreeLinks,
    regs: EvalNodeState,
    agg: Dist,
    f: Option<Dist>,
    last_first: Option<(u32, u64)>,
    waves: u32,
}

#[derive(Clone, Copy, Debug)]
enum Arrival {
    Down,
    Up(Option<NodeId>),
}

impl EvaluationProgram {
    pub fn new(n: usize, d: Dist, u0: NodeId, root: NodeId) -> Self {
        let w = Widths::new(n);
        EvaluationProgram {
            d: d as u64,
            u0,
            root,
            w,
            tau_bits: bits_for(2 * n.saturating_sub(1) as u64),
            round_bits: bits_for(9 * d as u64 + 1),
            stride: 2,
        }
    }

    /// Rounds taken by the forward pass.
    pub fn forward_rounds(&self) -> u64 {
        9 * self.d
    }

    #[cfg(test)]
    fn with_stride(mut self, stride: u64) -> Self {
        self.stride = stride;
        self
    }

    fn token(&self, ctx: &RoundCtx, s: &mut EvalState, inbox: &Inbox, out: &mut Outbox) -> Result<(), EngineError> {
        let k = ctx.round;
        let arrival = if k == 0 {
            (ctx.node == self.u0).then_some(Arrival::Down)
        } else {
            inbox.iter().next().map(|(from, word)| {
                if Some(from) == s.links.parent {
                    Arrival::Down
                } else {
                    let [sib] = word.unpack([self.w.opt_id]);
                    Arrival::Up(decode_opt(sib))
                }
            })
        };
        let Some(arrival) = arrival else { return Ok(()) };
        let is_root = ctx.node == self.root;
        let restart = matches!(arrival, Arrival::Up(None)) && is_root;
        if (matches!(arrival, Arrival::Down) || restart) && s.regs.tau_prime.is_none() {
            s.regs.tau_prime = Some(k as u32);
            s.regs.in_s = true;
        }
        if k == 2 * self.d {
            return Ok(());
        }
        let down = Word::pack(&[(0, self.w.opt_id)]);
        let up = Word::pack(&[(encode_opt(s.links.next_sibling), self.w.opt_id)]);
        match (arrival, restart) {
            (Arrival::Down, _) | (_, true) => match s.links.first_child {
                Some(c) => out.send(c, down),
                None => match s.links.parent {
                    Some(p) => out.send(p, up),
                    None => Err(ctx.fail("token at a childless root")),
                },
            },
            (Arrival::Up(Some(sib)), _) => out.send(sib, down),
            (Arrival::Up(None), false) => match s.links.parent {
                Some(p) => out.send(p, up),
                None => Err(ctx.fail("token lost above the root")),
            },
        }
    }

    fn first_arrival(&self, ctx: &RoundCtx, s: &mut EvalState, tau: u32, j: u64) -> Result<(), EngineError> {
        if let Some((t1, r1)) = s.last_first {
            if j - r1 < (tau - t1) as u64 {
                return Err(ctx.fail(format!(
                    "wave {tau} arrived {} rounds after wave {t1}, fewer than their offset gap",
                    j - r1
                )));
            }
        }
        s.last_first = Some((tau, j));
        s.waves += 1;
        Ok(())
    }

    fn waves(&self, ctx: &RoundCtx, s: &mut EvalState, inbox: &Inbox, out: &mut Outbox) -> Result<(), EngineError> {
        let j = ctx.round - 2 * self.d;
        let mut forward: Option<(u32, Dist)> = None;
        if j >= 1 {
            let mut kept: Option<(u64, u64)> = None;
            for (_, word) in inbox.iter() {
                let [tau, delta] = word.unpack([self.tau_bits, self.w.dist]);
                if tau as i64 <= s.regs.t_v {
                    continue;
                }
                match kept {
                    None => kept = Some((tau, delta)),
                    Some(m) if m == (tau, delta) => {}
                    Some(m) => {
                        return Err(ctx.fail(format!(
                            "surviving waves differ: {m:?} and {:?}",
                            (tau, delta)
                        )))
                    }
                }
            }
            if let Some((tau, delta)) = kept {
                let dist = delta as Dist + 1;
                s.regs.t_v = tau as i64;
                s.regs.d_v = s.regs.d_v.max(dist);
                self.first_arrival(ctx, s, tau as u32, j)?;
                forward = Some((tau as u32, dist));
            }
        }
        if let Some(t) = s.regs.tau_prime {
            if j == self.stride * t as u64 {
                if forward.is_some() || t as i64 <= s.regs.t_v {
                    return Err(ctx.fail(format!("wave {t} starts after a newer wave arrived")));
                }
                s.regs.t_v = t as i64;
                self.first_arrival(ctx, s, t, j)?;
                forward = Some((t, 0));
            }
        }
        if let Some((tau, dist)) = forward {
            if j < 6 * self.d {
                out.broadcast(Word::pack(&[(tau as u64, self.tau_bits), (dist as u64, self.w.dist)]))?;
            }
        }
        Ok(())
    }

    fn convergecast(&self, ctx: &RoundCtx, s: &mut EvalState, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let c = ctx.round - 8 * self.d;
        if c >= 1 {
            for (_, word) in inbox.iter() {
                let [v] = word.unpack([self.w.dist]);
                s.agg = s.agg.max(v as Dist);
            }
        }
        let depth = s.links.depth as u64;
        if depth > self.d {
            return Err(ctx.fail("node deeper than d"));
        }
        if c < self.d - depth {
            return Ok(Status::Continue);
        }
        s.agg = s.agg.max(s.regs.d_v);
        match s.links.parent {
            Some(p) => out.send(p, Word::pack(&[(s.agg as u64, self.w.dist)]))?,
            None => s.f = Some(s.agg),
        }
        Ok(Status::Halt)
    }
}

impl NodeProgram for EvaluationProgram {
    type Input = TreeLinks;
    type State = EvalState;
    type Output = (EvalNodeState, Option<Dist>, u32);

    fn schema(&self) -> RegisterSchema {
        let w = self.w;
        RegisterSchema::new()
            .field("parent", w.opt_id)
            .field("depth", w.dist)
            .field("first_child", w.opt_id)
            .field("next_sibling", w.opt_id)
            .field("member", 1)
            .field("u0", w.id)
            .field("round", self.round_bits)
            .field("tau_prime", self.tau_bits + 1)
            .field("t_v", self.tau_bits + 1)
            .field("d_v", w.dist)
            .field("message", self.tau_bits + w.dist)
            .field("agg", w.dist)
    }

    fn init(&self, _: NodeId, links: &TreeLinks) -> EvalState {
        EvalState { links: *links, regs: EvalNodeState::default(), agg: 0, f: None, last_first: None, waves: 0 }
    }

    fn step(&self, ctx: &RoundCtx, s: &mut EvalState, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let k = ctx.round;
        let d = self.d;
        if k <= 2 * d {
            self.token(ctx, s, inbox, out)?;
        }
        if (2 * d..=8 * d).contains(&k) {
            self.waves(ctx, s, inbox, out)?;
        }
        if k >= 8 * d {
            return self.convergecast(ctx, s, inbox, out);
        }
        Ok(Status::Continue)
    }

    fn output(&self, _: NodeId, s: EvalState) -> Self::Output {
        (s.regs, s.f, s.waves)
    }
}

#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub value: Dist,
    /// Members of `S(u0)` with their offsets, ascending by node.
    pub s_set: Vec<(NodeId, u32)>,
    pub forward_rounds: u64,
    /// Forward pass plus the mirrored reversal.
    pub cost: CostReport,
}

pub fn evaluation_procedure(g: &Graph, tree: &EvalTree, u0: NodeId, bandwidth: u32) -> Result<EvalOutcome, ProcedureError> {
    run_evaluation(g, tree, EvaluationProgram::new(g.n(), tree.d, u0, tree.root), bandwidth)
}

fn run_evaluation(g: &Graph, tree: &EvalTree, program: EvaluationProgram, bandwidth: u32) -> Result<EvalOutcome, ProcedureError> {
    let n = g.n();
    let u0 = program.u0;
    if u0 >= n || !tree.links[u0].member {
        return Err(ProcedureError::InvalidInput(format!("u0 = {u0} is not a tree member")));
    }
    let ex = engine::run(g, &program, &tree.links, &run_config(n, bandwidth, 9 * (tree.d as u64 + 1)))?;
    let forward_rounds = ex.cost.rounds;
    if forward_rounds != program.forward_rounds() {
        return Err(ProcedureError::Invariant(format!(
            "evaluation took {forward_rounds} rounds, schedule is {}",
            program.forward_rounds()
        )));
    }
    let s_set: Vec<(NodeId, u32)> = ex
        .outputs
        .iter()
        .enumerate()
        .filter_map(|(v, (regs, _, _))| regs.tau_prime.map(|t| (v, t)))
        .collect();
    let expected = set_s(u0, tree.d, &tree.numbering);
    if s_set.iter().map(|&(v, _)| v).ne(expected.iter().copied()) {
        return Err(ProcedureError::Invariant(format!("walk visited {s_set:?}, window oracle gives {expected:?}")));
    }
    if let Some(&(v, t)) = s_set.iter().find(|&&(v, t)| tree.numbering.offset(u0, v) != Some(t)) {
        return Err(ProcedureError::Invariant(format!("node {v} recorded offset {t}")));
    }
    if let Some(v) = ex.outputs.iter().position(|o| o.2 as usize != s_set.len()) {
        return Err(ProcedureError::Invariant(format!(
            "node {v} saw {} of {} waves before the window closed",
            ex.outputs[v].2,
            s_set.len()
        )));
    }
    let value = ex.outputs[tree.root]
        .1
        .ok_or_else(|| ProcedureError::Invariant("root produced no value".into()))?;
    let mut cost = ex.cost;
    cost.rounds *= 2;
    cost.total_words *= 2;
    cost.leader = Some(tree.root);
    Ok(EvalOutcome { value, s_set, forward_rounds, cost })
}
