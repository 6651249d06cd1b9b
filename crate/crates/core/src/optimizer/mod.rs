//! Joint key-length and power allocation.
//!
//! Full-power transmission reduces the problem to two variables, the message
//! power `p_m` and the (relaxed) key length `d_k`. Block coordinate descent
//! alternates exact 1-D maximizations over each, and the key length is then
//! rounded to the better of its integer neighbours.

mod baseline;
mod bcd;
mod blocks;
pub mod search;

use thiserror::Error;

use crate::link::LinkError;

pub use baseline::{baseline_optimize, baseline_secure_reliability, BaselineSolution};
pub use bcd::{
    bcd_optimize, BcdConfig, IterationRecord, OptimizationTrace, RoundingOutcome, TraceStatus,
};
pub use blocks::{
    find_initial_feasible, maximize_keylen, maximize_power, round_keylen, INIT_GRID,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error("no feasible {axis} with the other coordinate fixed at {fixed}")]
    EmptyFeasibleSet { axis: &'static str, fixed: f64 },
    #[error("no feasible full-power strategy found")]
    Infeasible,
    #[error("both integer neighbours of d_k = {d_k_relaxed} are infeasible")]
    BothNeighborsInfeasible { d_k_relaxed: f64 },
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
}
