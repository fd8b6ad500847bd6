//! MIS procedures: the classic baselines, the two-round regular-graph step,
//! weighted inclusion, pre-shattering and the deterministic completion.

mod baseline;
mod completion;
mod inclusion;
mod pipeline;
mod profile;
mod shattering;
mod two_round;

pub use baseline::{ghaffari_step, luby_step};
pub use completion::completion;
pub use inclusion::{inclusion_with_ranks, weighted_inclusion, InclusionOutcome, InclusionRule};
pub use pipeline::{
    default_iteration_cap, run_algorithm, run_full_mis, run_tree_mis, Algorithm, RunOptions,
};
pub use profile::{intervals_regular, log_star, ParamProfile, ProfileMode, RegularIntervals};
pub use shattering::{
    classify_golden, is_golden, lemma310_check, lemma37_violations, pre_shattering,
    pre_shattering_from, DegreeBound, PreShattering,
};
pub use two_round::{two_round_regular, two_round_with_ranks, TwoRoundOutcome};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{GraphError, NodeSet};
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum MisError {
    #[error("constants are undefined or tau >= 1 at delta = {delta}")]
    DegenerateProfile { delta: usize },
    #[error("invalid constants: {0}")]
    InvalidConstants(String),
    #[error("the profile has no rank intervals (k = 0)")]
    DegenerateK,
    #[error("delta = {delta} is below the minimum of {minimum}")]
    DeltaTooSmall { delta: usize, minimum: usize },
    #[error("node {node} has weight {weight}, outside [0, {cap}]")]
    WeightCapViolation { node: usize, weight: f64, cap: f64 },
    #[error("per-node detail for iteration {0} is missing; rerun with the full trace level")]
    TraceTooCoarse(u64),
    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of the candidacy test in weighted inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateLabel {
    NotCandidate,
    /// Low-desire candidate.
    CMinus,
    /// High-desire candidate whose rank fell in interval `i`.
    CPlus(usize),
}

impl CandidateLabel {
    pub fn is_candidate(self) -> bool {
        self != CandidateLabel::NotCandidate
    }
}

/// Desire weights indexed by node id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<f64>);

impl WeightVector {
    pub fn constant(n: usize, p: f64) -> Self {
        Self(vec![p; n])
    }

    pub fn get(&self, v: usize) -> f64 {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Every alive node's weight must lie in `[0, cap]`.
    pub fn check_cap(&self, alive: &NodeSet, cap: f64) -> Result<(), MisError> {
        assert_eq!(self.0.len(), alive.universe_size());
        match alive.iter().find(|&v| !(0.0..=cap).contains(&self.0[v])) {
            Some(node) => Err(MisError::WeightCapViolation {
                node,
                weight: self.0[node],
                cap,
            }),
            None => Ok(()),
        }
    }
}
