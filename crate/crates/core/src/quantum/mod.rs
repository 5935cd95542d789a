//! Exact simulation of amplitude amplification and quantum maximum finding.
//!
//! Setup and Evaluation act classically on every branch of the index
//! register: each branch carries the index `x` plus registers that are
//! functions of `x` alone. The global state is therefore fully described by
//! one complex amplitude per candidate, and the simulation is lossless.

mod cost;
mod search;
mod state;

pub use cost::{distributed_cost, CallCosts};
pub use search::{amplitude_amplify_decide, call_budget, ceil_log2_f, quantum_maximize, repetitions, QOptConfig, SearchCost, C1};
pub use state::{grover_iterate, setup_subset, setup_uniform, AmplitudeState, MAX_BRANCHES};

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("empty candidate set")]
    EmptyDomain,
    #[error("{0} candidates exceed the simulation limit")]
    TooLarge(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("setup state has empty support")]
    EmptySupport,
}
