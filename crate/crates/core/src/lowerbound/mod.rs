//! Lower-bound constructions: the disjointness gadget and its stretched
//! form, two-party reduction accounting, and the scheduler that lets two
//! parties simulate an algorithm on a path network with few messages.

mod gadget;
mod path_exec;
mod schedule;

pub use gadget::{
    gadget_apply_inputs, gadget_build, gadget_with_inputs, reduction_protocol_cost, stretch, stretched_gap, DisjInput, GadgetLayout,
    GapStats, StretchedGadget,
};
pub use path_exec::{
    execute_direct, execute_schedule_classical, BitExchange, Equality, ExecutionComparison, PathProgram, RandomProgram,
};
pub use schedule::{
    build_two_party_schedule, closed_form_messages, validate_schedule, Message, Party, Register, ScheduleCell, ScheduleReport,
    TwoPartySchedule,
};

#[derive(Debug, thiserror::Error)]
pub enum LowerBoundError {
    #[error("invalid gadget size n = {0}: need n ≡ 2 (mod 4) and n ≥ 6")]
    InvalidSize(usize),
    #[error("input length mismatch: expected {expected} bits, got {got}")]
    InputLength { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Engine(#[from] crate::engine::EngineError),
}
