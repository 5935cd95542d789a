//! Minimum-id election with eccentricity of the winner.
//!
//! Every node starts a BFS wave carrying its id; a node adopts any wave with
//! a smaller id. Children announce themselves by a flag on the wave they
//! forward to their parent, so two rounds after adopting a wave a node knows
//! its children. Echoes carry (subtree depth, subtree size) back up; a root
//! whose echo covers all `n` nodes is the leader. It floods the eccentricity
//! and everyone halts. Total: `3·ecc(leader) + 2` rounds.

use crate::engine::{self, CostReport, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, Status, TraceEvent, Word};
use crate::graph::{Dist, Graph, NodeId};

use super::{run_config, ProcedureError, Widths};

const WAVE: u64 = 0;
const ECHO: u64 = 1;
const DONE: u64 = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    pub leader: NodeId,
    pub ecc_leader: Dist,
}

struct ElectProgram {
    n: usize,
    w: Widths,
}

#[derive(Debug)]
struct ElectState {
    best: NodeId,
    parent: Option<NodeId>,
    since: u8,
    children: u32,
    echoes: u32,
    depth_max: u32,
    size: u32,
    echo_sent: bool,
    result: Option<(NodeId, u32)>,
}

impl ElectProgram {
    fn wave(&self, x: NodeId, dist: u32, flag: bool) -> Word {
        Word::pack(&[(WAVE, 2), (x as u64, self.w.id), (dist as u64, self.w.dist), (flag as u64, 1)])
    }
}

fn fresh(best: NodeId, dist: u32, parent: Option<NodeId>) -> ElectState {
    ElectState {
        best,
        parent,
        since: 0,
        children: 0,
        echoes: 0,
        depth_max: dist,
        size: 1,
        echo_sent: false,
        result: None,
    }
}

impl NodeProgram for ElectProgram {
    type Input = ();
    type State = ElectState;
    type Output = Option<(NodeId, u32)>;

    fn schema(&self) -> RegisterSchema {
        let w = self.w;
        RegisterSchema::new()
            .field("best", w.id)
            .field("parent", w.opt_id)
            .field("since", 2)
            .field("children", w.count)
            .field("echoes", w.count)
            .field("depth_max", w.dist)
            .field("size", w.count)
            .field("echo_sent", 1)
            .field("leader", w.id)
            .field("ecc", w.dist)
    }

    fn init(&self, node: NodeId, _: &()) -> ElectState {
        fresh(node, 0, None)
    }

    fn step(&self, ctx: &RoundCtx, s: &mut ElectState, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let w = self.w;
        if ctx.round == 0 {
            out.broadcast(self.wave(ctx.node, 0, false))?;
            return Ok(Status::Continue);
        }
        let mut candidate: Option<(NodeId, u32, NodeId)> = None;
        let (mut flags, mut echoes, mut depth, mut size) = (0u32, 0u32, 0u32, 0u32);
        let mut done: Option<(NodeId, u32)> = None;
        for (from, word) in inbox.iter() {
            let [tag] = word.unpack([2]);
            match tag {
                WAVE => {
                    let [_, x, d, flag] = word.unpack([2, w.id, w.dist, 1]);
                    let x = x as NodeId;
                    if x < s.best && candidate.is_none_or(|(cx, _, _)| x < cx) {
                        candidate = Some((x, d as u32 + 1, from));
                    } else if x == s.best && flag == 1 {
                        flags += 1;
                    }
                }
                ECHO => {
                    let [_, d, sz] = word.unpack([2, w.dist, w.count]);
                    echoes += 1;
                    depth = depth.max(d as u32);
                    size += sz as u32;
                }
                DONE => {
                    let [_, leader, ecc] = word.unpack([2, w.id, w.dist]);
                    done = Some((leader as NodeId, ecc as u32));
                }
                _ => return Err(ctx.fail("unknown election tag")),
            }
        }
        if let Some((leader, ecc)) = done {
            out.broadcast(Word::pack(&[(DONE, 2), (leader as u64, w.id), (ecc as u64, w.dist)]))?;
            s.result = Some((leader, ecc));
            return Ok(Status::Halt);
        }
        if let Some((x, dist, parent)) = candidate {
            *s = fresh(x, dist, Some(parent));
            for k in 0..out.neighbors().len() {
                let v = out.neighbors()[k];
                out.send_port(k, self.wave(x, dist, v == parent))?;
            }
            return Ok(Status::Continue);
        }
        s.since = (s.since + 1).min(3);
        s.children += flags;
        // Echoes for a wave arrive at least four rounds after its adoption;
        // earlier ones belong to an abandoned wave.
        if s.since >= 2 {
            s.echoes += echoes;
            s.depth_max = s.depth_max.max(depth);
            s.size += size;
        }
        if s.since >= 2 && !s.echo_sent && s.echoes == s.children {
            match s.parent {
                None if s.size as usize == self.n => {
                    let ecc = s.depth_max;
                    out.broadcast(Word::pack(&[(DONE, 2), (ctx.node as u64, w.id), (ecc as u64, w.dist)]))?;
                    s.result = Some((ctx.node, ecc));
                    return Ok(Status::Halt);
                }
                None => {}
                Some(p) => {
                    out.send(p, Word::pack(&[(ECHO, 2), (s.depth_max as u64, w.dist), (s.size as u64, w.count)]))?;
                    s.echo_sent = true;
                }
            }
        }
        Ok(Status::Continue)
    }

    fn output(&self, _: NodeId, s: ElectState) -> Option<(NodeId, u32)> {
        s.result
    }
}

pub fn elect_leader_and_ecc(g: &Graph, bandwidth: u32) -> Result<(Election, CostReport), ProcedureError> {
    elect_traced(g, bandwidth, false).map(|(e, c, _)| (e, c))
}

pub(crate) fn elect_traced(g: &Graph, bandwidth: u32, trace: bool) -> Result<(Election, CostReport, Vec<TraceEvent>), ProcedureError> {
    let n = g.n();
    let program = ElectProgram { n, w: Widths::new(n) };
    let mut config = run_config(n, bandwidth, 4);
    config.trace = trace;
    let ex = engine::run(g, &program, &vec![(); n], &config)?;
    let first = ex.outputs[0].ok_or_else(|| ProcedureError::Invariant("node 0 ended without a leader".into()))?;
    if let Some(u) = ex.outputs.iter().position(|o| *o != Some(first)) {
        return Err(ProcedureError::Invariant(format!("node {u} disagrees on the leader")));
    }
    let mut cost = ex.cost;
    cost.leader = Some(first.0);
    Ok((Election { leader: first.0, ecc_leader: first.1 }, cost, ex.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::default_bandwidth;
    use crate::graph::{eccentricity, generate, Family};

    fn elect(g: &Graph) -> (Election, CostReport) {
        elect_leader_and_ecc(g, default_bandwidth(g.n())).unwrap()
    }

    #[test]
    fn small_cases() {
        let (e, _) = elect(&generate(Family::Cycle, 4, 0).unwrap());
        assert_eq!(e, Election { leader: 0, ecc_leader: 2 });
        let (e, _) = elect(&generate(Family::Cycle, 3, 0).unwrap());
        assert_eq!(e, Election { leader: 0, ecc_leader: 1 });
    }

    #[test]
    fn rounds_are_three_ecc_plus_two() {
        for (family, n) in [(Family::Path, 9), (Family::Star, 7), (Family::Grid, 20), (Family::Lollipop, 16)] {
            let g = generate(family, n, 0).unwrap();
            let (e, cost) = elect(&g);
            assert_eq!(e.ecc_leader, eccentricity(&g, 0).unwrap());
            assert_eq!(cost.rounds, 3 * e.ecc_leader as u64 + 2, "{family}");
        }
    }

    #[test]
    fn leader_far_from_high_ids() {
        // Node 0 at the far end of a path whose other nodes form local minima
        // for many rounds: node 5 must not finish early.
        let edges = [(0, 4), (4, 3), (3, 2), (2, 1), (1, 5)];
        let g = Graph::from_edges(6, &edges).unwrap();
        let (e, _) = elect(&g);
        assert_eq!(e, Election { leader: 0, ecc_leader: 5 });
    }

    #[test]
    fn random_graphs_match_oracle() {
        for seed in 0..30 {
            let g = generate(Family::Random(0.15), 24, seed).unwrap();
            let (e, _) = elect(&g);
            assert_eq!(e.ecc_leader, eccentricity(&g, 0).unwrap());
        }
    }

    #[test]
    fn single_node() {
        let g = Graph::from_edges(1, &[]).unwrap();
        assert_eq!(elect(&g).0, Election { leader: 0, ecc_leader: 0 });
    }
}
