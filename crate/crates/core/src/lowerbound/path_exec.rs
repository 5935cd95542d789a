//! Classical programs on the path `A = P_0, …, P_{d+1} = B` that follow the
//! alternating-direction discipline, executed both directly in the engine and
//! through a two-party schedule.

use std::collections::BTreeMap;

use crate::engine::{self, EngineError, Inbox, NodeProgram, Outbox, RegisterSchema, RoundCtx, RunConfig, Status, Word};
use crate::graph::{generate, Family, NodeId};
use crate::seed::{derive, splitmix64};

use super::schedule::{active, message_register, TwoPartySchedule};
use super::LowerBoundError;

/// One step of `P_i` at time `t`: consumes the incoming message register
/// value and emits the next one. Values wider than [`PathProgram::width`]
/// are truncated.
pub trait PathProgram: Sync {
    fn width(&self) -> u32;
    fn init_private(&self, i: usize, d: usize, x: u64, y: u64) -> u64;
    fn cell(&self, i: usize, t: u64, private: u64, incoming: u64) -> (u64, u64);
    fn output(&self, private_a: u64) -> u64;
}

fn mask(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1 << width) - 1
    }
}

/// `B` repeatedly sends `y` leftwards; every relay forwards the last value it
/// received. `A` outputs whether the latest arrival equals `x`, which is `y`
/// once `r ≥ 2d + 3`.
pub struct Equality {
    pub d: usize,
    pub k: u32,
}

impl PathProgram for Equality {
    fn width(&self) -> u32 {
        self.k
    }

    fn init_private(&self, i: usize, d: usize, x: u64, y: u64) -> u64 {
        match i {
            0 => x,
            _ if i == d + 1 => y,
            _ => 0,
        }
    }

    fn cell(&self, i: usize, t: u64, private: u64, incoming: u64) -> (u64, u64) {
        let m = mask(self.k);
        if i == 0 {
            return ((private & m) | (incoming & m) << 32, 0);
        }
        if i == self.d + 1 {
            return (private, private);
        }
        if t % 2 == 1 {
            (incoming, 0)
        } else {
            (private, private)
        }
    }

    fn output(&self, private_a: u64) -> u64 {
        ((private_a & mask(self.k)) == (private_a >> 32)) as u64
    }
}

/// `x` travels right and `y` travels left, relayed by every node. The low
/// half of each private register holds the leftward value, the high half the
/// rightward one; `A` outputs what reached it from the right.
pub struct BitExchange {
    pub k: u32,
}

impl PathProgram for BitExchange {
    fn width(&self) -> u32 {
        self.k
    }

    fn init_private(&self, i: usize, d: usize, x: u64, y: u64) -> u64 {
        match i {
            0 => x << 32,
            _ if i == d + 1 => y,
            _ => 0,
        }
    }

    fn cell(&self, _: usize, t: u64, private: u64, incoming: u64) -> (u64, u64) {
        let (low, high) = (private & 0xffff_ffff, private >> 32);
        if t % 2 == 1 {
            (high << 32 | incoming, high)
        } else {
            (incoming << 32 | low, low)
        }
    }

    fn output(&self, private_a: u64) -> u64 {
        private_a & 0xffff_ffff
    }
}

/// Pseudo-random state transitions keyed by `seed`.
pub struct RandomProgram {
    pub seed: u64,
    pub width: u32,
}

impl PathProgram for RandomProgram {
    fn width(&self) -> u32 {
        self.width
    }

    fn init_private(&self, i: usize, d: usize, x: u64, y: u64) -> u64 {
        let base = derive(self.seed, i as u64);
        match i {
            0 => base ^ x,
            _ if i == d + 1 => base ^ y,
            _ => base,
        }
    }

    fn cell(&self, i: usize, t: u64, private: u64, incoming: u64) -> (u64, u64) {
        let h = splitmix64(derive(derive(self.seed, i as u64), t) ^ private.rotate_left(17) ^ incoming);
        (h, splitmix64(h ^ self.seed))
    }

    fn output(&self, private_a: u64) -> u64 {
        private_a
    }
}

struct EnginePath<'a, P> {
    program: &'a P,
    d: usize,
    r: u64,
}

impl<P: PathProgram> NodeProgram for EnginePath<'_, P> {
    type Input = u64;
    type State = u64;
    type Output = u64;

    fn schema(&self) -> RegisterSchema {
        RegisterSchema::new().field("private", 64).field("message", self.program.width())
    }

    fn init(&self, _: NodeId, init: &u64) -> u64 {
        *init
    }

    fn step(&self, ctx: &RoundCtx, private: &mut u64, inbox: &Inbox, out: &mut Outbox) -> Result<Status, EngineError> {
        let (i, t) = (ctx.node, ctx.round + 1);
        // One idle step after the last one so its messages reach the trace.
        if t > self.r {
            return Ok(Status::Halt);
        }
        if active(i, t, self.d) {
            let neighbor = if t % 2 == 1 { i + 1 } else { i - 1 };
            let w = self.program.width();
            let incoming = if t == 1 {
                0
            } else {
                inbox.from(neighbor).ok_or_else(|| ctx.fail("expected message missing"))?.unpack([w])[0]
            };
            let (next, message) = self.program.cell(i, t, *private, incoming);
            *private = next;
            out.send(neighbor, Word::pack(&[(message & mask(w), w)]))?;
        }
        Ok(Status::Continue)
    }

    fn output(&self, _: NodeId, private: u64) -> u64 {
        private
    }
}

/// Outputs and message transcript of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathRun {
    pub output_a: u64,
    /// Message register value written by each cell `(i, t)`.
    pub messages: BTreeMap<(usize, u64), u64>,
}

/// Runs the program on the `(d + 2)`-node path in the engine.
pub fn execute_direct<P: PathProgram>(program: &P, d: usize, r: u64, x: u64, y: u64) -> Result<PathRun, LowerBoundError> {
    if program.width() == 0 || program.width() > 64 {
        return Err(LowerBoundError::InvalidParameter(format!("message width {}", program.width())));
    }
    let g = generate(Family::Path, d + 2, 0)?;
    let inputs: Vec<u64> = (0..d + 2).map(|i| program.init_private(i, d, x, y)).collect();
    let ex = engine::run(&g, &EnginePath { program, d, r }, &inputs, &RunConfig::new(64, r + 3).with_trace())?;
    let mut messages = BTreeMap::new();
    for e in &ex.trace {
        let value = u64::from_str_radix(&e.word, 16).map_err(|err| LowerBoundError::InvalidParameter(err.to_string()))?;
        messages.insert((e.edge.0, e.round), value);
    }
    Ok(PathRun { output_a: program.output(ex.outputs[0]), messages })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionComparison {
    pub two_party_output: u64,
    pub direct_output: u64,
    pub cells_checked: usize,
    /// Cells whose message register value differs from the engine transcript.
    pub mismatches: Vec<(usize, u64)>,
}

impl ExecutionComparison {
    pub fn ok(&self) -> bool {
        self.two_party_output == self.direct_output && self.mismatches.is_empty()
    }
}

/// Executes the cells of `sched` in order on explicit registers and compares
/// the result with a direct engine run of the same program.
pub fn execute_schedule_classical<P: PathProgram>(
    program: &P,
    x: u64,
    y: u64,
    sched: &TwoPartySchedule,
) -> Result<ExecutionComparison, LowerBoundError> {
    let (d, r) = (sched.d, sched.r);
    let direct = execute_direct(program, d, r, x, y)?;
    let m = mask(program.width());
    let mut private: Vec<u64> = (0..d + 2).map(|i| program.init_private(i, d, x, y)).collect();
    let mut message = vec![0u64; d + 1];
    let mut mismatches = Vec::new();
    for c in &sched.cells {
        let k = message_register(c.i, c.t);
        let (next, out) = program.cell(c.i, c.t, private[c.i], message[k]);
        private[c.i] = next;
        message[k] = out & m;
        if direct.messages.get(&(c.i, c.t)) != Some(&message[k]) {
            mismatches.push((c.i, c.t));
        }
    }
    Ok(ExecutionComparison {
        two_party_output: program.output(private[0]),
        direct_output: direct.output_a,
        cells_checked: sched.cells.len(),
        mismatches,
    })
}
