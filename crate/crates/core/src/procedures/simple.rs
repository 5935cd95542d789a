//! Eccentricity of a single branch index: BFS from `u0` for `2d` rounds
//! (enough since `ecc(u0) ≤ D ≤ 2d`), then a `d`-round convergecast of the
//! largest distance to the root. The schedule does not depend on `u0`.

use crate::engine::{self, CostReport, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, Status, Word};
use crate::graph::{Dist, Graph, NodeId};

use super::evaluation::EvalTree;
use super::{run_config, ProcedureError, TreeLinks, Widths};

pub struct SimpleEvalProgram {
    d: u64,
    u0: NodeId,
    w: Widths,
}

pub struct SimpleState {
    links: TreeLinks,
    dist: Option<Dist>,
    agg: Dist,
    f: Option<Dist>,
}

impl SimpleEvalProgram {
    pub fn new(n: usize, d: Dist, u0: NodeId) -> Self {
        SimpleEvalProgram { d: d as u64, u0, w: Widths::new(n) }
    }

    pub fn forward_rounds(&self) -> u64 {
        3 * self.d
    }
}

impl NodeProgram for SimpleEvalProgram {
    type Input = TreeLinks;
    type State = SimpleState;
    type Output = (Option<Dist>, Option<Dist>);

    fn schema(&self) -> RegisterSchema {
        let w = self.w;
        RegisterSchema::new()
            .field("parent", w.opt_id)
            .field("depth", w.dist)
            .field("u0", w.id)
            .field("round", w.dist + 2)
            .field("dist", w.opt_id)
            .field("agg", w.dist)
    }

    fn init(&self, _: NodeId, links: &TreeLinks) -> SimpleState {
        SimpleState { links: *links, dist: None, agg: 0, f: None }
    }

    fn step(&self, ctx: &RoundCtx, s: &mut SimpleState, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let (k, d) = (ctx.round, self.d);
        if k <= 2 * d && s.dist.is_none() {
            let reached = if k == 0 {
                (ctx.node == self.u0).then_some(0)
            } else {
                inbox.iter().next().map(|(_, w)| w.unpack([self.w.dist])[0] as Dist + 1)
            };
            if let Some(dist) = reached {
                s.dist = Some(dist);
                if k < 2 * d {
                    out.broadcast(Word::pack(&[(dist as u64, self.w.dist)]))?;
                }
            }
        }
        if k < 2 * d {
            return Ok(Status::Continue);
        }
        let Some(dist) = s.dist else {
            return Err(ctx.fail("not reached by the u0 search within 2d rounds"));
        };
        let c = k - 2 * d;
        if c >= 1 {
            for (_, word) in inbox.iter() {
                s.agg = s.agg.max(word.unpack([self.w.dist])[0] as Dist);
            }
        }
        if c < d - s.links.depth as u64 {
            return Ok(Status::Continue);
        }
        s.agg = s.agg.max(dist);
        match s.links.parent {
            Some(p) => out.send(p, Word::pack(&[(s.agg as u64, self.w.dist)]))?,
            None => s.f = Some(s.agg),
        }
        Ok(Status::Halt)
    }

    fn output(&self, _: NodeId, s: SimpleState) -> Self::Output {
        (s.dist, s.f)
    }
}

/// Returns `ecc(u0)` and the cost including the mirrored reversal.
pub fn eccentricity_simple_eval(g: &Graph, tree: &EvalTree, u0: NodeId, bandwidth: u32) -> Result<(Dist, CostReport), ProcedureError> {
    let n = g.n();
    if u0 >= n {
        return Err(ProcedureError::InvalidInput(format!("u0 = {u0} out of range")));
    }
    let program = SimpleEvalProgram::new(n, tree.d, u0);
    let ex = engine::run(g, &program, &tree.links, &run_config(n, bandwidth, 3 * (tree.d as u64 + 1)))?;
    if ex.cost.rounds != program.forward_rounds() {
        return Err(ProcedureError::Invariant(format!("simple evaluation took {} rounds", ex.cost.rounds)));
    }
    let value = ex.outputs[tree.root]
        .1
        .ok_or_else(|| ProcedureError::Invariant("root produced no value".into()))?;
    let mut cost = ex.cost;
    cost.rounds *= 2;
    cost.total_words *= 2;
    cost.leader = Some(tree.root);
    Ok((value, cost))
}
