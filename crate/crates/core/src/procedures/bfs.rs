use crate::engine::{self, CostReport, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, Status, TraceEvent, Word};
use crate::graph::{Dist, Graph, NodeId};

use super::{decode_opt, encode_opt, run_config, ProcedureError, Widths};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsTreeState {
    pub leader: NodeId,
    /// `parent[leader] == leader`.
    pub parent: Vec<NodeId>,
    pub dist: Vec<Dist>,
    pub ecc_leader: Dist,
}

impl BfsTreeState {
    pub fn parent_of(&self, v: NodeId) -> Option<NodeId> {
        (v != self.leader).then_some(self.parent[v])
    }

    pub fn check(&self, g: &Graph) -> Result<(), String> {
        if self.parent[self.leader] != self.leader || self.dist[self.leader] != 0 {
            return Err("leader is not its own parent at distance 0".into());
        }
        for v in 0..g.n() {
            if v == self.leader {
                continue;
            }
            let p = self.parent[v];
            if !g.has_edge(v, p) || self.dist[p] + 1 != self.dist[v] {
                return Err(format!("node {v}: parent {p} is not one level up"));
            }
        }
        if self.dist.iter().copied().max() != Some(self.ecc_leader) {
            return Err("ecc_leader is not the maximum distance".into());
        }
        Ok(())
    }
}

/// The activation flood: the leader sends at round 0, every node adopts the
/// smallest-id sender of the first message it hears, forwards, and halts.
struct BfsProgram {
    leader: NodeId,
    w: Widths,
}

impl NodeProgram for BfsProgram {
    type Input = ();
    type State = Option<(NodeId, Dist)>;
    type Output = Option<(NodeId, Dist)>;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new().field("parent", self.w.opt_id).field("dist", self.w.dist)
    }

    fn init(&self, _: NodeId, _: &()) -> Self::State {
        None
    }

    fn step(&self, ctx: &RoundCtx, s: &mut Self::State, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        if ctx.node == self.leader {
            *s = Some((ctx.node, 0));
            out.broadcast(Word::pack(&[(0, self.w.dist)]))?;
            return Ok(Status::Halt);
        }
        match inbox.iter().next() {
            Some((from, word)) => {
                let [delta] = word.unpack([self.w.dist]);
                let dist = delta as Dist + 1;
                *s = Some((from, dist));
                out.broadcast(Word::pack(&[(dist as u64, self.w.dist)]))?;
                Ok(Status::Halt)
            }
            None => Ok(Status::Continue),
        }
    }

    fn output(&self, _: NodeId, s: Self::State) -> Self::Output {
        s
    }
}

pub fn build_bfs_tree(g: &Graph, leader: NodeId, bandwidth: u32) -> Result<(BfsTreeState, CostReport), ProcedureError> {
    bfs_traced(g, leader, bandwidth, false).map(|(t, c, _)| (t, c))
}

pub(crate) fn bfs_traced(
    g: &Graph,
    leader: NodeId,
    bandwidth: u32,
    trace: bool,
) -> Result<(BfsTreeState, CostReport, Vec<TraceEvent>), ProcedureError> {
    let n = g.n();
    if leader >= n {
        return Err(ProcedureError::InvalidInput(format!("leader {leader} out of range")));
    }
    let program = BfsProgram { leader, w: Widths::new(n) };
    let mut config = run_config(n, bandwidth, 1);
    config.trace = trace;
    let ex = engine::run(g, &program, &vec![(); n], &config)?;
    let mut parent = vec![0; n];
    let mut dist = vec![0; n];
    for (v, o) in ex.outputs.into_iter().enumerate() {
        let (p, d) = o.ok_or_else(|| ProcedureError::Invariant(format!("node {v} never activated")))?;
        parent[v] = p;
        dist[v] = d;
    }
    let ecc_leader = dist.iter().copied().max().unwrap_or(0);
    let mut cost = ex.cost;
    cost.leader = Some(leader);
    Ok((BfsTreeState { leader, parent, dist, ecc_leader }, cost, ex.trace))
}

/// Per-node view of a rooted tree in left-child/right-sibling form. Only
/// `member` nodes take part in the tree walk; `parent` and `depth` refer to
/// the spanning BFS tree used for convergecasts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeLinks {
    pub parent: Option<NodeId>,
    pub depth: Dist,
    pub first_child: Option<NodeId>,
    pub next_sibling: Option<NodeId>,
    pub member: bool,
}

struct LinkProgram {
    w: Widths,
}

#[derive(Clone, Copy, Default)]
struct LinkState {
    first_child: Option<NodeId>,
    next_sibling: Option<NodeId>,
}

impl NodeProgram for LinkProgram {
    type Input = (Option<NodeId>, bool);
    type State = ((Option<NodeId>, bool), LinkState);
    type Output = LinkState;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new()
            .field("parent", self.w.opt_id)
            .field("member", 1)
            .field("first_child", self.w.opt_id)
            .field("next_sibling", self.w.opt_id)
    }

    fn init(&self, _: NodeId, input: &Self::Input) -> Self::State {
        (*input, LinkState::default())
    }

    fn step(&self, ctx: &RoundCtx, s: &mut Self::State, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let ((parent, member), links) = s;
        match ctx.round {
            0 => {
                if let (Some(p), true) = (*parent, *member) {
                    out.send(p, Word::pack(&[(1, 1)]))?;
                }
                Ok(Status::Continue)
            }
            1 => {
                let children: Vec<NodeId> = inbox.iter().map(|(c, _)| c).collect();
                links.first_child = children.first().copied();
                for (i, &c) in children.iter().enumerate() {
                    let next = children.get(i + 1).copied();
                    out.send(c, Word::pack(&[(encode_opt(next), self.w.opt_id)]))?;
                }
                Ok(Status::Continue)
            }
            _ => {
                if let Some(word) = parent.and_then(|p| inbox.from(p)) {
                    let [next] = word.unpack([self.w.opt_id]);
                    links.next_sibling = decode_opt(next);
                }
                Ok(Status::Halt)
            }
        }
    }

    fn output(&self, _: NodeId, s: Self::State) -> LinkState {
        s.1
    }
}

/// Two rounds: members tell their parent they are children, then each
/// parent tells every child its next sibling in id order. `members` must be
/// closed under taking parents.
pub fn link_children(
    g: &Graph,
    tree: &BfsTreeState,
    members: &[bool],
    bandwidth: u32,
) -> Result<(Vec<TreeLinks>, CostReport), ProcedureError> {
    link_traced(g, tree, members, bandwidth, false).map(|(l, c, _)| (l, c))
}

pub(crate) fn link_traced(
    g: &Graph,
    tree: &BfsTreeState,
    members: &[bool],
    bandwidth: u32,
    trace: bool,
) -> Result<(Vec<TreeLinks>, CostReport, Vec<TraceEvent>), ProcedureError> {
    let n = g.n();
    if !members[tree.leader] {
        return Err(ProcedureError::InvalidInput("tree root must be a member".into()));
    }
    if let Some(v) = (0..n).find(|&v| members[v] && !members[tree.parent[v]]) {
        return Err(ProcedureError::InvalidInput(format!("member {v} has a non-member parent")));
    }
    let inputs: Vec<_> = (0..n).map(|v| (tree.parent_of(v), members[v])).collect();
    let mut config = run_config(n, bandwidth, 1);
    config.trace = trace;
    let ex = engine::run(g, &LinkProgram { w: Widths::new(n) }, &inputs, &config)?;
    let links = ex
        .outputs
        .into_iter()
        .enumerate()
        .map(|(v, l)| TreeLinks {
            parent: tree.parent_of(v),
            depth: tree.dist[v],
            first_child: l.first_child,
            next_sibling: l.next_sibling,
            member: members[v],
        })
        .collect();
    Ok((links, ex.cost, ex.trace))
}
