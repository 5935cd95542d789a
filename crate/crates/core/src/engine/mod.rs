//! Round-synchronous CONGEST execution.
//!
//! Round 0 is a local step with empty inboxes. Before every later round the
//! engine delivers exactly one [`Word`] per directed edge (empty when nothing
//! was sent). A node stops being stepped once it halts; whatever it sent in
//! its halting step is still delivered. The run's round count is the index of
//! the last step taken.

mod word;

pub use word::{bits_for, ceil_log2, RegisterSchema, Word};

use std::io::Write;

use serde::Serialize;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("node {node} sent a {len}-bit word in round {round} (bandwidth {bandwidth})")]
    Oversized { node: NodeId, round: u64, len: u32, bandwidth: u32 },
    #[error("node {node} addressed non-neighbor {target} in round {round}")]
    NotNeighbor { node: NodeId, round: u64, target: NodeId },
    #[error("node {node} sent twice to {target} in round {round}")]
    DuplicateSend { node: NodeId, round: u64, target: NodeId },
    #[error("node {node} holds {bits} bits in round {round}, schema allows {schema}")]
    SchemaOverflow { node: NodeId, round: u64, bits: u64, schema: u64 },
    #[error("no halt after {max_rounds} rounds")]
    Timeout { max_rounds: u64, partial: Box<CostReport> },
    #[error("node {node}, round {round}: {msg}")]
    Program { node: NodeId, round: u64, msg: String },
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

/// `c · ⌈log₂ n⌉`, with the logarithm clamped below at 2.
pub fn bandwidth_for(n: usize, c: u32) -> u32 {
    c * ceil_log2(n as u64).max(2)
}

pub fn default_bandwidth(n: usize) -> u32 {
    bandwidth_for(n, 4)
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct CostReport {
    pub rounds: u64,
    pub total_words: u64,
    pub per_node_peak_bits: Vec<u64>,
    pub per_node_peak_qubits: Vec<u64>,
    pub leader: Option<NodeId>,
}

impl CostReport {
    pub fn empty(n: usize) -> Self {
        CostReport {
            per_node_peak_bits: vec![0; n],
            per_node_peak_qubits: vec![0; n],
            ..Default::default()
        }
    }

    /// Sequential composition: rounds and words add, memory peaks take the max.
    pub fn then(&mut self, next: &CostReport) {
        self.rounds += next.rounds;
        self.total_words += next.total_words;
        merge_max(&mut self.per_node_peak_bits, &next.per_node_peak_bits);
        merge_max(&mut self.per_node_peak_qubits, &next.per_node_peak_qubits);
        if next.leader.is_some() {
            self.leader = next.leader;
        }
    }

    pub fn max_peak_bits(&self) -> u64 {
        self.per_node_peak_bits.iter().copied().max().unwrap_or(0)
    }
}

fn merge_max(a: &mut Vec<u64>, b: &[u64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0);
    }
    for (x, &y) in a.iter_mut().zip(b) {
        *x = (*x).max(y);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Continue,
    Halt,
}

pub struct RoundCtx {
    pub round: u64,
    pub node: NodeId,
    pub n: usize,
    pub bandwidth: u32,
}

impl RoundCtx {
    pub fn fail(&self, msg: impl Into<String>) -> EngineError {
        EngineError::Program { node: self.node, round: self.round, msg: msg.into() }
    }
}

/// Words received this round, one slot per neighbor.
pub struct Inbox<'a> {
    neighbors: &'a [NodeId],
    words: &'a [Word],
}

impl<'a> Inbox<'a> {
    /// Non-empty words with their senders, in ascending sender order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, Word)> + 'a {
        self.neighbors
            .iter()
            .copied()
            .zip(self.words.iter().copied())
            .filter(|(_, w)| !w.is_empty())
    }

    pub fn from(&self, neighbor: NodeId) -> Option<Word> {
        let k = self.neighbors.binary_search(&neighbor).ok()?;
        Some(self.words[k]).filter(|w| !w.is_empty())
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(Word::is_empty)
    }
}

pub struct Outbox<'a> {
    neighbors: &'a [NodeId],
    words: &'a mut [Word],
    node: NodeId,
    round: u64,
    bandwidth: u32,
}

impl Outbox<'_> {
    pub fn neighbors(&self) -> &[NodeId] {
        self.neighbors
    }

    pub fn send(&mut self, to: NodeId, word: Word) -> Result<(), EngineError> {
        let k = self.neighbors.binary_search(&to).map_err(|_| EngineError::NotNeighbor {
            node: self.node,
            round: self.round,
            target: to,
        })?;
        self.send_port(k, word)
    }

    pub fn send_port(&mut self, k: usize, word: Word) -> Result<(), EngineError> {
        if word.len() > self.bandwidth {
            return Err(EngineError::Oversized {
                node: self.node,
                round: self.round,
                len: word.len(),
                bandwidth: self.bandwidth,
            });
        }
        if !self.words[k].is_empty() {
            return Err(EngineError::DuplicateSend {
                node: self.node,
                round: self.round,
                target: self.neighbors[k],
            });
        }
        self.words[k] = word;
        Ok(())
    }

    pub fn broadcast(&mut self, word: Word) -> Result<(), EngineError> {
        for k in 0..self.neighbors.len() {
            self.send_port(k, word)?;
        }
        Ok(())
    }
}

pub trait NodeProgram: Sync {
    type Input;
    type State;
    type Output;

    fn schema(&self) -> RegisterSchema;

    fn init(&self, node: NodeId, input: &Self::Input) -> Self::State;

    fn step(
        &self,
        ctx: &RoundCtx,
        state: &mut Self::State,
        inbox: &Inbox<'_>,
        outbox: &mut Outbox<'_>,
    ) -> Result<Status, EngineError>;

    /// Bits currently held in registers; must stay within the schema.
    /// `None` means the full schema is always live.
    fn memory_bits(&self, state: &Self::State) -> Option<u64> {
        let _ = state;
        None
    }

    fn output(&self, node: NodeId, state: Self::State) -> Self::Output;
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub bandwidth: u32,
    pub max_rounds: u64,
    pub trace: bool,
}

impl RunConfig {
    pub fn new(bandwidth: u32, max_rounds: u64) -> Self {
        RunConfig { bandwidth, max_rounds, trace: false }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    /// Round in which the word is delivered.
    pub round: u64,
    pub edge: (NodeId, NodeId),
    pub word: String,
    pub len: u32,
}

pub fn write_trace<W: Write>(events: &[TraceEvent], mut out: W) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut out, e)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Debug)]
pub struct Execution<O> {
    pub outputs: Vec<O>,
    pub cost: CostReport,
    /// Sorted by round, then by edge.
    pub trace: Vec<TraceEvent>,
}

pub fn run<P: NodeProgram>(
    g: &Graph,
    program: &P,
    inputs: &[P::Input],
    config: &RunConfig,
) -> Result<Execution<P::Output>, EngineError> {
    let n = g.n();
    if config.max_rounds == 0 {
        return Err(EngineError::InvalidConfig("max_rounds must be positive".into()));
    }
    if config.bandwidth == 0 || config.bandwidth > 64 {
        return Err(EngineError::InvalidConfig(format!("bandwidth {} outside 1..=64", config.bandwidth)));
    }
    if inputs.len() != n {
        return Err(EngineError::InvalidConfig(format!("{} inputs for {n} nodes", inputs.len())));
    }
    let schema_bits = program.schema().total_bits();
    let mut states: Vec<P::State> = (0..n).map(|u| program.init(u, &inputs[u])).collect();
    let mut peak: Vec<u64> = states.iter().map(|s| program.memory_bits(s).unwrap_or(schema_bits)).collect();
    let mut halted = vec![false; n];
    let mut live = n;
    let arcs = g.directed_edge_count();
    let mut reverse = vec![0usize; arcs];
    for u in 0..n {
        for (k, &v) in g.neighbors(u).iter().enumerate() {
            reverse[g.edge_index(u, k)] = g.edge_index(v, g.port_of(v, u).expect("symmetric"));
        }
    }
    let mut inbox = vec![Word::EMPTY; arcs];
    let mut outbox = vec![Word::EMPTY; arcs];
    let mut report = CostReport::empty(n);
    let mut trace = Vec::new();
    let mut round = 0u64;
    loop {
        for u in 0..n {
            let (lo, hi) = (g.edge_index(u, 0), g.edge_index(u, g.degree(u)));
            let out = &mut outbox[lo..hi];
            out.fill(Word::EMPTY);
            if halted[u] {
                continue;
            }
            let ctx = RoundCtx { round, node: u, n, bandwidth: config.bandwidth };
            let inb = Inbox { neighbors: g.neighbors(u), words: &inbox[lo..hi] };
            let mut outb = Outbox {
                neighbors: g.neighbors(u),
                words: out,
                node: u,
                round,
                bandwidth: config.bandwidth,
            };
            let status = program.step(&ctx, &mut states[u], &inb, &mut outb)?;
            let bits = program.memory_bits(&states[u]).unwrap_or(schema_bits);
            if bits > schema_bits {
                return Err(EngineError::SchemaOverflow { node: u, round, bits, schema: schema_bits });
            }
            peak[u] = peak[u].max(bits);
            if status == Status::Halt {
                halted[u] = true;
                live -= 1;
            }
        }
        if live == 0 {
            break;
        }
        if round == config.max_rounds {
            report.rounds = round;
            report.per_node_peak_bits = peak;
            return Err(EngineError::Timeout { max_rounds: config.max_rounds, partial: Box::new(report) });
        }
        round += 1;
        for u in 0..n {
            for (k, &v) in g.neighbors(u).iter().enumerate() {
                let e = g.edge_index(u, k);
                let w = outbox[e];
                inbox[reverse[e]] = w;
                if !w.is_empty() {
                    report.total_words += 1;
                    if config.trace {
                        trace.push(TraceEvent { round, edge: (u, v), word: w.to_hex(), len: w.len() });
                    }
                }
            }
        }
    }
    report.rounds = round;
    report.per_node_peak_bits = peak;
    let outputs = states.into_iter().enumerate().map(|(u, s)| program.output(u, s)).collect();
    Ok(Execution { outputs, cost: report, trace })
}
