//! Amplitude amplification with an unknown marked mass, and the
//! threshold-raising maximum search built on it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::state::{grover_iterate, AmplitudeState};
use super::SearchError;

/// Constant of the worst-case call budget
/// `C1 · √(ln(1/δ)/ε) · (⌈log₂(1/ε)⌉ + 2)`.
pub const C1: f64 = 32.0;

/// Growth factor of the iteration-count ramp.
const RAMP: f64 = 6.0 / 5.0;

/// Cached amplified states per iteration count stay below this many amplitudes.
const CACHE_AMPLITUDES: usize = 1 << 22;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchCost {
    pub setup_calls: u64,
    pub eval_calls: u64,
    pub inverse_calls: u64,
    pub rounds_charged: u64,
    pub leader_qubits_peak: u64,
    pub node_qubits_peak: u64,
    pub phases: u64,
    pub attempts: u64,
    pub threshold_raises: u64,
    pub aborted: bool,
}

impl SearchCost {
    pub fn calls(&self) -> u64 {
        self.setup_calls + self.eval_calls + self.inverse_calls
    }

    fn charge_attempt(&mut self, j: u64) {
        self.setup_calls += 1 + j;
        self.inverse_calls += 2 * j;
        self.eval_calls += j + 1;
        self.attempts += 1;
    }
}

#[derive(Clone, Debug)]
pub struct QOptConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    pub max_phases: u64,
}

impl QOptConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> Self {
        QOptConfig { epsilon, delta, seed, max_phases: 10_000 }
    }

    fn validate(&self) -> Result<(), SearchError> {
        validate(self.epsilon, self.delta)
    }
}

fn validate(epsilon: f64, delta: f64) -> Result<(), SearchError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SearchError::InvalidParameter(format!("epsilon {epsilon} outside (0, 1]")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SearchError::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    Ok(())
}

/// `⌈log₂ x⌉` for `x ≥ 1`, robust to rounding just above a power of two.
pub fn ceil_log2_f(x: f64) -> u64 {
    let l = x.log2();
    let r = l.round();
    if (l - r).abs() < 1e-9 {
        r.max(0.0) as u64
    } else {
        l.ceil().max(0.0) as u64
    }
}

/// Worst-case number of Setup, Evaluation and inverse calls of
/// [`quantum_maximize`]; the search aborts rather than exceed it.
pub fn call_budget(epsilon: f64, delta: f64) -> u64 {
    let b = C1 * ((1.0 / delta).ln() / epsilon).sqrt() * (ceil_log2_f(1.0 / epsilon) + 2) as f64;
    b.ceil() as u64
}

/// Repetitions at the full iteration cap so that a phase with marked mass at
/// least its target misses with probability at most `delta`.
pub fn repetitions(delta: f64) -> u64 {
    ((1.0 / delta).ln() / (4.0f64 / 3.0).ln()).ceil().max(1.0) as u64
}

enum Phase {
    Found(usize),
    Missed,
    Aborted,
}

struct Amplifier<'a> {
    start: &'a AmplitudeState,
    marked: &'a [bool],
    nothing_marked: bool,
    cache: Vec<AmplitudeState>,
}

impl<'a> Amplifier<'a> {
    fn new(start: &'a AmplitudeState, marked: &'a [bool]) -> Self {
        let nothing_marked = start.probability(|x| marked[x]) == 0.0;
        Amplifier { start, marked, nothing_marked, cache: vec![start.clone()] }
    }

    /// State after `j` iterations, measured once.
    fn sample(&mut self, j: usize, rng: &mut ChaCha8Rng) -> usize {
        // With no marked mass the iterate fixes the Setup state exactly.
        if self.nothing_marked || j == 0 {
            return self.start.measure(rng);
        }
        let marked = self.marked;
        if (j + 1) * self.start.len() <= CACHE_AMPLITUDES {
            while self.cache.len() <= j {
                let mut next = self.cache.last().expect("non-empty").clone();
                grover_iterate(&mut next, |x| marked[x]).expect("non-empty state");
                self.cache.push(next);
            }
            return self.cache[j].measure(rng);
        }
        let mut s = self.start.clone();
        for _ in 0..j {
            grover_iterate(&mut s, |x| marked[x]).expect("non-empty state");
        }
        s.measure(rng)
    }

    fn phase(&mut self, epsilon: f64, delta: f64, rng: &mut ChaCha8Rng, cost: &mut SearchCost, budget: u64) -> Phase {
        cost.phases += 1;
        let cap = (1.0 / epsilon.sqrt()).ceil();
        let mut attempt = |m: f64, rng: &mut ChaCha8Rng, cost: &mut SearchCost| -> Option<Phase> {
            let j = rng.gen_range(0..m.ceil() as u64);
            if cost.calls() + 4 * j + 2 > budget {
                return Some(Phase::Aborted);
            }
            cost.charge_attempt(j);
            let x = self.sample(j as usize, rng);
            self.marked[x].then_some(Phase::Found(x))
        };
        let mut m: f64 = 1.0;
        loop {
            if let Some(p) = attempt(m, rng, cost) {
                return p;
            }
            if m >= cap {
                break;
            }
            m = (m * RAMP).min(cap);
        }
        for _ in 0..repetitions(delta) {
            if let Some(p) = attempt(cap, rng, cost) {
                return p;
            }
        }
        Phase::Missed
    }
}

/// Single amplification phase: finds a marked index if the marked mass is
/// at least `epsilon`, with failure probability at most `delta`.
pub fn amplitude_amplify_decide<F>(
    state0: &AmplitudeState,
    marked: F,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<(Option<usize>, SearchCost), SearchError>
where
    F: Fn(usize) -> bool,
{
    validate(epsilon, delta)?;
    if state0.is_empty() {
        return Err(SearchError::EmptyDomain);
    }
    let flags: Vec<bool> = (0..state0.len()).map(marked).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cost = SearchCost::default();
    let found = match Amplifier::new(state0, &flags).phase(epsilon, delta, &mut rng, &mut cost, u64::MAX) {
        Phase::Found(x) => Some(x),
        Phase::Missed | Phase::Aborted => None,
    };
    Ok((found, cost))
}

/// Threshold search for an index maximizing `f` over the support of `setup`.
///
/// Starting from the smallest support index `a`, each phase amplifies the
/// branches with `f(x) > f(a)` assuming their mass is at least `ε′`. A hit
/// raises the threshold and keeps `ε′`; a miss halves `ε′` until it drops to
/// `ε`, after which a miss ends the search.
pub fn quantum_maximize<F>(f: F, setup: &AmplitudeState, config: &QOptConfig) -> Result<(usize, SearchCost), SearchError>
where
    F: Fn(usize) -> u64,
{
    config.validate()?;
    let support = setup.support();
    let first = *support.first().ok_or(SearchError::EmptySupport)?;
    let values: Vec<u64> = (0..setup.len()).map(|x| if setup.setup_amplitudes()[x].norm_sqr() > 0.0 { f(x) } else { 0 }).collect();
    let budget = call_budget(config.epsilon, config.delta);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut cost = SearchCost { setup_calls: 1, eval_calls: 1, ..Default::default() };
    let mut best = first;
    let mut target = 0.5f64;
    loop {
        if cost.phases >= config.max_phases {
            cost.aborted = true;
            break;
        }
        let threshold = values[best];
        let flags: Vec<bool> = values.iter().map(|&v| v > threshold).collect();
        match Amplifier::new(setup, &flags).phase(target, config.delta, &mut rng, &mut cost, budget) {
            Phase::Found(x) => {
                best = x;
                cost.threshold_raises += 1;
            }
            Phase::Missed if target > config.epsilon => target /= 2.0,
            Phase::Missed => break,
            Phase::Aborted => {
                cost.aborted = true;
                break;
            }
        }
    }
    Ok((best, cost))
}
