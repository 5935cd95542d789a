//! Small classical building blocks: index broadcast down a tree, nearest
//! source search, and convergecast-then-broadcast aggregation.

use crate::engine::{self, CostReport, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, Status, Word};
use crate::graph::{Dist, Graph, NodeId};

use super::{run_config, ProcedureError, TreeLinks, Widths};

/// Root sends a value down its BFS tree; nodes accept it only from their parent.
pub struct BroadcastProgram {
    root: NodeId,
    value: u64,
    width: u32,
    w: Widths,
}

impl NodeProgram for BroadcastProgram {
    type Input = TreeLinks;
    type State = (TreeLinks, Option<u64>);
    type Output = Option<u64>;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new().field("parent", self.w.opt_id).field("value", self.width)
    }

    fn init(&self, _: NodeId, links: &TreeLinks) -> Self::State {
        (*links, None)
    }

    fn step(&self, ctx: &RoundCtx, s: &mut Self::State, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let word = if ctx.node == self.root {
            Some(Word::pack(&[(self.value, self.width)]))
        } else {
            s.0.parent.and_then(|p| inbox.from(p))
        };
        match word {
            Some(word) => {
                s.1 = Some(word.unpack([self.width])[0]);
                out.broadcast(word)?;
                Ok(Status::Halt)
            }
            None => Ok(Status::Continue),
        }
    }

    fn output(&self, _: NodeId, s: Self::State) -> Option<u64> {
        s.1
    }
}

/// Copies a branch index from the root to every node; `d` rounds for a tree
/// of depth `d`.
pub fn broadcast_index(g: &Graph, root: NodeId, links: &[TreeLinks], index: NodeId, bandwidth: u32) -> Result<CostReport, ProcedureError> {
    let n = g.n();
    let w = Widths::new(n);
    let program = BroadcastProgram { root, value: index as u64, width: w.id, w };
    let ex = engine::run(g, &program, links, &run_config(n, bandwidth, 1))?;
    if let Some(v) = ex.outputs.iter().position(|o| *o != Some(index as u64)) {
        return Err(ProcedureError::Invariant(format!("node {v} missed the index broadcast")));
    }
    Ok(ex.cost)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NearestSource {
    pub source: NodeId,
    pub dist: Dist,
}

struct MultiSourceProgram {
    w: Widths,
}

impl NodeProgram for MultiSourceProgram {
    type Input = bool;
    type State = (bool, Option<NearestSource>);
    type Output = Option<NearestSource>;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new().field("in_s", 1).field("source", self.w.opt_id).field("dist", self.w.dist)
    }

    fn init(&self, _: NodeId, in_s: &bool) -> Self::State {
        (*in_s, None)
    }

    fn step(&self, ctx: &RoundCtx, s: &mut Self::State, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let found = if s.0 {
            Some(ctx.node)
        } else {
            inbox.iter().map(|(_, w)| w.unpack([self.w.id])[0] as NodeId).min()
        };
        match found {
            Some(source) => {
                s.1 = Some(NearestSource { source, dist: ctx.round as Dist });
                out.broadcast(Word::pack(&[(source as u64, self.w.id)]))?;
                Ok(Status::Halt)
            }
            None => Ok(Status::Continue),
        }
    }

    fn output(&self, _: NodeId, s: Self::State) -> Self::Output {
        s.1
    }
}

/// For every node, the closest source (smallest id among equally close ones)
/// and its distance. Rounds = largest such distance.
pub fn multi_source_bfs(g: &Graph, sources: &[bool], bandwidth: u32) -> Result<(Vec<NearestSource>, CostReport), ProcedureError> {
    let n = g.n();
    if !sources.iter().any(|&b| b) {
        return Err(ProcedureError::InvalidInput("no sources".into()));
    }
    let ex = engine::run(g, &MultiSourceProgram { w: Widths::new(n) }, sources, &run_config(n, bandwidth, 1))?;
    let near = ex
        .outputs
        .into_iter()
        .enumerate()
        .map(|(v, o)| o.ok_or_else(|| ProcedureError::Invariant(format!("node {v} found no source"))))
        .collect::<Result<_, _>>()?;
    Ok((near, ex.cost))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Aggregate {
    Max,
    Sum,
}

struct AggregateProgram {
    d: u64,
    op: Aggregate,
    width: u32,
    w: Widths,
}

struct AggState {
    links: TreeLinks,
    acc: u64,
    result: Option<u64>,
}

impl AggregateProgram {
    fn combine(&self, a: u64, b: u64) -> u64 {
        match self.op {
            Aggregate::Max => a.max(b),
            Aggregate::Sum => a + b,
        }
    }
}

impl NodeProgram for AggregateProgram {
    type Input = (TreeLinks, u64);
    type State = AggState;
    type Output = Option<u64>;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new()
            .field("parent", self.w.opt_id)
            .field("depth", self.w.dist)
            .field("round", self.w.dist + 1)
            .field("acc", self.width)
            .field("result", self.width)
    }

    fn init(&self, _: NodeId, input: &Self::Input) -> AggState {
        AggState { links: input.0, acc: input.1, result: None }
    }

    fn step(&self, ctx: &RoundCtx, s: &mut AggState, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let (k, d) = (ctx.round, self.d);
        let h = s.links.depth as u64;
        if h > d {
            return Err(ctx.fail("node deeper than the declared depth"));
        }
        if k <= d - h {
            if k >= 1 {
                for (_, word) in inbox.iter() {
                    s.acc = self.combine(s.acc, word.unpack([self.width])[0]);
                }
            }
            if k == d - h {
                match s.links.parent {
                    Some(p) => out.send(p, Word::pack(&[(s.acc, self.width)]))?,
                    None => {
                        s.result = Some(s.acc);
                        out.broadcast(Word::pack(&[(s.acc, self.width)]))?;
                        return Ok(Status::Halt);
                    }
                }
            }
            return Ok(Status::Continue);
        }
        if k == d + h {
            let word = s
                .links
                .parent
                .and_then(|p| inbox.from(p))
                .ok_or_else(|| ctx.fail("aggregate result missing"))?;
            s.result = Some(word.unpack([self.width])[0]);
            out.broadcast(word)?;
            return Ok(Status::Halt);
        }
        Ok(Status::Continue)
    }

    fn output(&self, _: NodeId, s: AggState) -> Option<u64> {
        s.result
    }
}

/// Convergecasts `op` over `values` up a tree of depth at most `d`, then
/// broadcasts the result to everyone: `2d` rounds.
pub fn tree_aggregate(
    g: &Graph,
    links: &[TreeLinks],
    d: Dist,
    values: &[u64],
    width: u32,
    op: Aggregate,
    bandwidth: u32,
) -> Result<(u64, CostReport), ProcedureError> {
    let n = g.n();
    let program = AggregateProgram { d: d as u64, op, width, w: Widths::new(n) };
    let inputs: Vec<_> = links.iter().copied().zip(values.iter().copied()).collect();
    let ex = engine::run(g, &program, &inputs, &run_config(n, bandwidth, 2))?;
    let result = ex.outputs[0].ok_or_else(|| ProcedureError::Invariant("aggregate not delivered".into()))?;
    if ex.outputs.iter().any(|o| *o != Some(result)) {
        return Err(ProcedureError::Invariant("nodes disagree on the aggregate".into()));
    }
    Ok((result, ex.cost))
}
