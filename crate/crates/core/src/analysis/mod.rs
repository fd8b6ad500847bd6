//! Monte-Carlo estimators, bound checkers and exhaustive oracles.

mod checks;
mod oracle;
mod probe;
mod stats;

use thiserror::Error;

use crate::graph::GraphError;
use crate::mis::MisError;

pub use checks::{
    check_lemma31_bounds, check_lemma31_on, check_lemma32_case1, check_prop33,
    check_shattering_lemmas, check_survival, estimate, estimate_event, good_nodes,
    luby_deletion_per_node, select_probe, shatter_report, tally, EstimateConfig, Gadget,
    LabelAgreement, ProbeEvent, ShatterReport, SurvivalAlgo, DEFAULT_CONFIDENCE,
    MIN_CONDITIONING_EVENTS, MIN_TRIALS,
};
pub use oracle::{
    brute_force_mis_sizes, check_exponent_bounds, maximal_independent_masks,
    maximal_independent_sets, ExponentCheck, MisCensus, BRUTE_FORCE_LIMIT,
};
pub use probe::{InclusionProbe, LazyRanks, LubyProbe, TwoRoundProbe};
pub use stats::{wilson_interval, BoundDirection, EstimateReport, Verdict};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("graph has {nodes} nodes, exhaustive search is limited to {limit}")]
    TooLarge { nodes: usize, limit: usize },
    #[error("no node satisfies the good-node conditions")]
    NoGoodNodes,
    #[error("{trials} trials requested, at least {minimum} required")]
    TooFewTrials { trials: u64, minimum: u64 },
    #[error("invalid gadget: {0}")]
    BadGadget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Mis(#[from] MisError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<crate::sim::SimError> for AnalysisError {
    fn from(e: crate::sim::SimError) -> Self {
        AnalysisError::Mis(e.into())
    }
}
