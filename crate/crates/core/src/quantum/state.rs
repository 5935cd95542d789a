use num_complex::Complex64;
use rand::Rng;

use crate::par::{self, Exec};

use super::SearchError;

pub const MAX_BRANCHES: usize = 1 << 20;

/// Amplitudes over the candidate indices, together with the Setup state the
/// diffusion step reflects about.
///
/// Every register besides the index is a classical function of the index on
/// each branch, so this map is the full quantum state of the network.
#[derive(Clone, Debug)]
pub struct AmplitudeState {
    amplitudes: Vec<Complex64>,
    setup: Vec<Complex64>,
    pub flags: Vec<bool>,
    pub values: Vec<Option<u64>>,
    exec: Exec,
}

impl AmplitudeState {
    fn from_setup(setup: Vec<Complex64>) -> Self {
        let n = setup.len();
        AmplitudeState {
            amplitudes: setup.clone(),
            setup,
            flags: vec![false; n],
            values: vec![None; n],
            exec: Exec::default(),
        }
    }

    /// Builds a state from arbitrary amplitudes, which also become the
    /// reflection axis. Normalizes the input.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SearchError> {
        check_size(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(SearchError::InvalidParameter("zero or non-finite state".into()));
        }
        Ok(Self::from_setup(amps.into_iter().map(|a| a / norm).collect()))
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn setup_amplitudes(&self) -> &[Complex64] {
        &self.setup
    }

    /// Indices with non-zero Setup amplitude.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.setup[x].norm_sqr() > 0.0).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        par::sum_by(self.exec, &self.amplitudes, |_, a| a.norm_sqr())
    }

    pub fn probability<F: Fn(usize) -> bool + Sync + Send>(&self, pred: F) -> f64 {
        par::sum_by(self.exec, &self.amplitudes, |x, a| if pred(x) { a.norm_sqr() } else { 0.0 })
    }

    /// Restarts from the Setup state.
    pub fn reset(&mut self) {
        self.amplitudes.copy_from_slice(&self.setup);
    }

    pub fn mark<F: Fn(usize) -> bool>(&mut self, marked: F) {
        for (x, f) in self.flags.iter_mut().enumerate() {
            *f = marked(x);
        }
    }

    /// Samples an index with probability `|α_x|²`.
    pub fn measure<R: Rng>(&self, rng: &mut R) -> usize {
        let total = self.norm_sqr();
        let target = rng.gen::<f64>() * total;
        let mut acc = 0.0;
        let mut last = 0;
        for (x, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                acc += p;
                last = x;
                if target < acc {
                    return x;
                }
            }
        }
        last
    }
}

fn check_size(n: usize) -> Result<(), SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyDomain);
    }
    if n > MAX_BRANCHES {
        return Err(SearchError::TooLarge(n));
    }
    Ok(())
}

pub fn setup_uniform(size: usize) -> Result<AmplitudeState, SearchError> {
    check_size(size)?;
    let a = Complex64::new(1.0 / (size as f64).sqrt(), 0.0);
    Ok(AmplitudeState::from_setup(vec![a; size]))
}

/// Uniform over `subset`, zero elsewhere in `0..size`.
pub fn setup_subset(size: usize, subset: &[usize]) -> Result<AmplitudeState, SearchError> {
    check_size(size)?;
    let mut members = subset.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.is_empty() {
        return Err(SearchError::EmptySupport);
    }
    if let Some(&x) = members.iter().find(|&&x| x >= size) {
        return Err(SearchError::InvalidParameter(format!("index {x} outside 0..{size}")));
    }
    let a = Complex64::new(1.0 / (members.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); size];
    for x in members {
        amps[x] = a;
    }
    Ok(AmplitudeState::from_setup(amps))
}

/// One amplification step: phase-flip the marked branches, then reflect
/// about the Setup state (`2|s⟩⟨s| − I`). Updates `flags`.
pub fn grover_iterate<F>(state: &mut AmplitudeState, marked: F) -> Result<(), SearchError>
where
    F: Fn(usize) -> bool + Sync + Send,
{
    if state.is_empty() {
        return Err(SearchError::EmptyDomain);
    }
    state.mark(&marked);
    let exec = state.exec;
    let flags = &state.flags;
    par::for_each_mut(exec, &mut state.amplitudes, |x, a| {
        if flags[x] {
            *a = -*a;
        }
    });
    let setup = &state.setup;
    let re = par::sum_by(exec, &state.amplitudes, |x, a| (setup[x].conj() * a).re);
    let im = par::sum_by(exec, &state.amplitudes, |x, a| (setup[x].conj() * a).im);
    let overlap = Complex64::new(re, im);
    par::for_each_mut(exec, &mut state.amplitudes, |x, a| {
        *a = setup[x] * overlap * 2.0 - *a;
    });
    Ok(())
}
