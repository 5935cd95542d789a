//! Simulator for classical and quantum CONGEST networks with distributed
//! diameter algorithms, amplitude-amplification search and lower-bound
//! reduction tooling.

pub mod engine;
pub mod graph;
pub mod par;
pub mod procedures;
pub mod quantum;
pub mod diameter;
pub mod seed;
pub mod lowerbound;
pub mod harness;
