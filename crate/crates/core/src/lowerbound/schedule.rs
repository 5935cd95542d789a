//! Two-party simulation of an `r`-round algorithm on the path
//! `P_0 = A, P_1, …, P_d, P_{d+1} = B`.
//!
//! Node `P_i` keeps a private register `R_i`; the edge `P_i P_{i+1}` carries
//! the message register `T_i`. At odd steps messages move rightwards (cell
//! `(i, t)` with `i ≤ d` operates on `T_i`), at even steps leftwards (`i ≥ 1`
//! operates on `T_{i−1}`). Alice and Bob take turns simulating areas of
//! width `d` and hand the registers over after each turn, so the whole
//! simulation needs `⌈r/d⌉ + 1` messages.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    fn of_phase(phase: u32) -> Party {
        if phase % 2 == 1 {
            Party::Bob
        } else {
            Party::Alice
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Register {
    Private(usize),
    Message(usize),
}

impl fmt::Display for Register {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Register::Private(i) => write!(f, "R{i}"),
            Register::Message(i) => write!(f, "T{i}"),
        }
    }
}

impl Serialize for Register {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleCell {
    pub i: usize,
    pub t: u64,
    pub owner: Party,
    /// `1..=⌈r/d⌉` for the alternating turns; one more for Alice's
    /// completion before the output message.
    pub phase: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Message {
    pub sender: Party,
    pub phase: u32,
    pub registers: Vec<Register>,
    /// The closing message carrying the result instead of registers.
    pub output: bool,
}

impl Message {
    /// Qubits sent, with `bw` per message register and `s_mem` per private
    /// register or output.
    pub fn qubits(&self, bw: u64, s_mem: u64) -> u64 {
        if self.output {
            return s_mem;
        }
        self.registers
            .iter()
            .map(|r| match r {
                Register::Private(_) => s_mem,
                Register::Message(_) => bw,
            })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoPartySchedule {
    pub r: u64,
    pub d: usize,
    pub phases: u32,
    /// In execution order.
    pub cells: Vec<ScheduleCell>,
    pub messages: Vec<Message>,
}

impl TwoPartySchedule {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }
}

/// Whether `P_i` communicates at step `t`.
pub fn active(i: usize, t: u64, d: usize) -> bool {
    if t % 2 == 1 {
        i <= d
    } else {
        i >= 1
    }
}

/// Index of the message register cell `(i, t)` reads and overwrites.
pub fn message_register(i: usize, t: u64) -> usize {
    if t % 2 == 1 {
        i
    } else {
        i - 1
    }
}

type Cell = (usize, u64);

/// The previous cell of `P_i` and the cell that last wrote the message
/// register `(i, t)` reads.
pub fn dependencies(i: usize, t: u64, d: usize) -> (Option<Cell>, Option<Cell>) {
    let prev = (1..t).rev().find(|&tt| active(i, tt, d)).map(|tt| (i, tt));
    let writer = if t == 1 {
        None
    } else if t % 2 == 1 {
        Some((i + 1, t - 1))
    } else {
        Some((i - 1, t - 1))
    };
    (prev, writer)
}

fn past_cone(r: u64, d: usize) -> BTreeSet<Cell> {
    let mut need = BTreeSet::new();
    let mut stack: Vec<Cell> = (1..=r).filter(|&t| active(0, t, d)).map(|t| (0, t)).collect();
    while let Some(c) = stack.pop() {
        if need.insert(c) {
            let (p, w) = dependencies(c.0, c.1, d);
            stack.extend(p);
            stack.extend(w);
        }
    }
    need
}

pub fn closed_form_messages(r: u64, d: usize) -> usize {
    r.div_ceil(d as u64) as usize + 1
}

fn own_endpoint(party: Party, d: usize) -> Register {
    match party {
        Party::Alice => Register::Private(0),
        Party::Bob => Register::Private(d + 1),
    }
}

fn registers_of(i: usize, t: u64) -> [Register; 2] {
    [Register::Private(i), Register::Message(message_register(i, t))]
}

/// Turn `s` (odd: Bob, even: Alice) first simulates every `P_i` up to the
/// first bound, then up to the second; bounds are capped at `r`.
fn phase_bounds(s: u64, d: usize) -> [Vec<(usize, u64)>; 2] {
    let du = d as u64;
    if s % 2 == 1 {
        [
            (2..=d + 1).map(|i| (i, (s - 1) * du + i as u64 - 1)).collect(),
            (1..=d).map(|i| (i, (s - 1) * du + i as u64)).collect(),
        ]
    } else {
        [
            (0..d).map(|i| (i, (s * du).saturating_sub(i as u64))).collect(),
            (1..=d).map(|i| (i, (s * du + 1).saturating_sub(i as u64))).collect(),
        ]
    }
}

pub fn build_two_party_schedule(r: u64, d: usize) -> TwoPartySchedule {
    assert!(r >= 1 && d >= 1, "schedule needs r ≥ 1 and d ≥ 1");
    let phases = r.div_ceil(d as u64) as u32;
    let mut done: BTreeSet<Cell> = BTreeSet::new();
    let mut holder: BTreeMap<Register, Party> = BTreeMap::new();
    holder.insert(Register::Private(0), Party::Alice);
    holder.insert(Register::Private(d + 1), Party::Bob);
    let mut cells = Vec::new();
    let mut messages = Vec::new();
    let execute = |cells: &mut Vec<ScheduleCell>, holder: &mut BTreeMap<Register, Party>, owner: Party, phase: u32, (i, t): Cell| {
        for reg in registers_of(i, t) {
            holder.entry(reg).or_insert(owner);
        }
        cells.push(ScheduleCell { i, t, owner, phase });
    };
    for s in 1..=phases {
        let owner = Party::of_phase(s);
        for bounds in phase_bounds(s as u64, d) {
            let mut batch: Vec<Cell> = Vec::new();
            for (i, ub) in bounds {
                for t in 1..=ub.min(r) {
                    if active(i, t, d) && done.insert((i, t)) {
                        batch.push((i, t));
                    }
                }
            }
            batch.sort_by_key(|&(i, t)| (t, i));
            for c in batch {
                execute(&mut cells, &mut holder, owner, s, c);
            }
        }
        let keep = own_endpoint(owner, d);
        let sent: Vec<Register> = holder.iter().filter(|&(&reg, &p)| p == owner && reg != keep).map(|(&reg, _)| reg).collect();
        for reg in &sent {
            holder.insert(*reg, owner.other());
        }
        messages.push(Message { sender: owner, phase: s, registers: sent, output: false });
    }
    let mut rest: Vec<Cell> = past_cone(r, d).difference(&done).copied().collect();
    rest.sort_by_key(|&(i, t)| (t, i));
    for c in rest {
        execute(&mut cells, &mut holder, Party::Alice, phases + 1, c);
    }
    messages.push(Message { sender: Party::Alice, phase: phases + 1, registers: Vec::new(), output: true });
    TwoPartySchedule { r, d, phases, cells, messages }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScheduleReport {
    pub r: u64,
    pub d: usize,
    pub cells: usize,
    pub messages: usize,
    pub closed_form: usize,
    pub max_payload: u64,
    pub payload_bound: u64,
    pub violations: Vec<String>,
}

impl ScheduleReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&str> {
        self.violations.first().map(String::as_str)
    }
}

/// Replays `sched` tracking which party holds each register and which cell
/// last wrote it. Every cell must find both of its registers with its owner,
/// written by exactly the cells it depends on.
pub fn validate_schedule(sched: &TwoPartySchedule, bw: u64, s_mem: u64) -> ScheduleReport {
    let (r, d) = (sched.r, sched.d);
    let mut violations = Vec::new();
    let mut holder: BTreeMap<Register, Party> = BTreeMap::new();
    let mut version: BTreeMap<Register, Cell> = BTreeMap::new();
    holder.insert(Register::Private(0), Party::Alice);
    holder.insert(Register::Private(d + 1), Party::Bob);
    let mut executed: BTreeSet<Cell> = BTreeSet::new();
    let mut next_msg = 0;

    let deliver = |m: &Message, holder: &mut BTreeMap<Register, Party>, violations: &mut Vec<String>| {
        for reg in &m.registers {
            match holder.get(reg) {
                Some(&p) if p == m.sender => {
                    holder.insert(*reg, m.sender.other());
                }
                other => violations.push(format!("phase {} message sends {reg} held by {other:?}", m.phase)),
            }
        }
    };

    for c in &sched.cells {
        while next_msg < sched.messages.len() && sched.messages[next_msg].phase < c.phase {
            deliver(&sched.messages[next_msg], &mut holder, &mut violations);
            next_msg += 1;
        }
        let at = format!("cell (i={}, t={})", c.i, c.t);
        if c.i > d + 1 || c.t == 0 || c.t > r || !active(c.i, c.t, d) {
            violations.push(format!("{at} is not an active cell"));
            continue;
        }
        if !executed.insert((c.i, c.t)) {
            violations.push(format!("{at} executed twice"));
        }
        if (c.i == 0 && c.owner != Party::Alice) || (c.i == d + 1 && c.owner != Party::Bob) {
            violations.push(format!("{at} is an endpoint cell simulated by {:?}", c.owner));
        }
        let (prev, writer) = dependencies(c.i, c.t, d);
        for (reg, dep) in registers_of(c.i, c.t).into_iter().zip([prev, writer]) {
            match holder.get(&reg) {
                None if !version.contains_key(&reg) => {
                    holder.insert(reg, c.owner);
                }
                Some(&p) if p == c.owner => {}
                h => violations.push(format!("{at} by {:?} needs {reg} held by {h:?}", c.owner)),
            }
            if version.get(&reg).copied() != dep {
                violations.push(format!("{at} reads {reg} written by {:?}, needs {dep:?}", version.get(&reg)));
            }
            version.insert(reg, (c.i, c.t));
        }
    }
    for m in &sched.messages[next_msg..] {
        deliver(m, &mut holder, &mut violations);
    }

    let missing: Vec<Cell> = past_cone(r, d).difference(&executed).copied().collect();
    if let Some(&(i, t)) = missing.first() {
        violations.push(format!("{} cells A depends on never ran, first (i={i}, t={t})", missing.len()));
    }
    let closed_form = closed_form_messages(r, d);
    if sched.messages.len() != closed_form {
        violations.push(format!("{} messages, closed form {closed_form}", sched.messages.len()));
    }
    for (k, m) in sched.messages.iter().enumerate() {
        let phase = k as u32 + 1;
        if !m.output && (m.phase != phase || m.sender != Party::of_phase(phase)) {
            violations.push(format!("message {k} sent by {:?} in phase {}", m.sender, m.phase));
        }
    }
    let du = d as u64;
    let payload_bound = du * (bw + s_mem) + du * bw;
    let max_payload = sched.messages.iter().map(|m| m.qubits(bw, s_mem)).max().unwrap_or(0);
    if max_payload > payload_bound {
        violations.push(format!("payload {max_payload} exceeds {payload_bound}"));
    }
    ScheduleReport {
        r,
        d,
        cells: sched.cells.len(),
        messages: sched.messages.len(),
        closed_form,
        max_payload,
        payload_bound,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_rounds_two_relays() {
        let s = build_two_party_schedule(8, 2);
        assert_eq!(s.phases, 4);
        assert_eq!(s.messages.len(), 5);
        let senders: Vec<Party> = s.messages.iter().map(|m| m.sender).collect();
        assert_eq!(senders, vec![Party::Bob, Party::Alice, Party::Bob, Party::Alice, Party::Alice]);
        assert!(validate_schedule(&s, 8, 8).ok());
    }

    #[test]
    fn single_area() {
        let s = build_two_party_schedule(5, 5);
        assert_eq!(s.messages.len(), 2);
        assert!(validate_schedule(&s, 4, 4).ok());
        let s = build_two_party_schedule(3, 7);
        assert_eq!(s.messages.len(), 2);
        assert!(validate_schedule(&s, 4, 4).ok());
    }

    #[test]
    fn two_areas() {
        let s = build_two_party_schedule(6, 3);
        let owners: Vec<Party> = s.messages[..2].iter().map(|m| m.sender).collect();
        assert_eq!(owners, vec![Party::Bob, Party::Alice]);
        assert!(validate_schedule(&s, 4, 4).ok());
    }

    #[test]
    fn flipped_owner_detected() {
        let mut s = build_two_party_schedule(12, 3);
        let k = s.cells.iter().position(|c| c.i == 2 && c.phase == 2).unwrap();
        s.cells[k].owner = s.cells[k].owner.other();
        let report = validate_schedule(&s, 4, 4);
        assert!(!report.ok());
        assert!(report.first_violation().unwrap().contains("i=2"));
    }

    #[test]
    fn dependency_rule() {
        assert_eq!(dependencies(0, 1, 3), (None, None));
        assert_eq!(dependencies(0, 3, 3), (Some((0, 1)), Some((1, 2))));
        assert_eq!(dependencies(2, 4, 3), (Some((2, 3)), Some((1, 3))));
        assert_eq!(dependencies(4, 2, 3), (None, Some((3, 1))));
    }

    #[test]
    fn json_dump() {
        let json = build_two_party_schedule(4, 2).to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["messages"].as_array().unwrap().len(), 3);
        assert!(json.contains("\"T0\""));
    }
}
