//! Round-synchronous LOCAL-model execution.

mod engine;
mod rng;
mod trace;

pub use engine::{
    check_joined, closed_neighborhood, draw_ranks, run_round, Decisions, LocalView, Network,
    NodeState, RoundOutcome, Status,
};
pub use rng::RngStream;
pub use trace::{IterationRecord, NodeDetail, RunTrace, TraceLevel, TRACE_SCHEMA_VERSION};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("node {node} read the state of node {requested}, which is not an alive neighbour")]
    LocalityViolation { node: usize, requested: usize },
    #[error("completion stage exceeded its iteration cap of {cap}")]
    IterationCapExceeded { cap: u64 },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
