use serde::{Deserialize, Serialize};

/// Version of the trace JSON schema (see `docs/formats.md`).
pub const TRACE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TraceLevel {
    /// Per-iteration counters and per-node golden / degree-reduction totals.
    #[default]
    Summary,
    /// Additionally keeps every node's weight and neighbourhood desire per iteration.
    Full,
}

/// Per-node values after one pre-shattering iteration. `None` marks nodes
/// that are no longer alive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDetail {
    /// Desire weight `p_v` after the update of this iteration.
    pub desire: Vec<Option<f64>>,
    /// Neighbourhood desire `d_v` over alive neighbours, after the update.
    pub total_desire: Vec<Option<f64>>,
    pub golden: Vec<bool>,
    pub degree_reduction: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    /// 1-based iteration index.
    pub iteration: u64,
    /// Communication rounds this iteration used.
    pub rounds: u64,
    /// Alive nodes after the iteration.
    pub alive_count: usize,
    /// Edges among alive nodes after the iteration.
    pub alive_edges: usize,
    /// Nodes that joined the independent set in this iteration.
    pub mis_increment: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<NodeDetail>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub schema_version: u32,
    pub algorithm: String,
    pub seed: u64,
    pub node_count: usize,
    pub level: TraceLevel,
    /// Fixed iteration count of the main phase, when it has one (pre-shattering T).
    pub planned_iterations: Option<u64>,
    pub iterations: Vec<IterationRecord>,
    /// Rounds spent before the main phase (the optional degree-capping pass).
    #[serde(default)]
    pub prelude_rounds: u64,
    /// Rounds of the randomized main phase.
    pub main_rounds: u64,
    /// Rounds of the deterministic completion stage.
    pub completion_rounds: u64,
    /// Golden-iteration count per node at the end of the main phase.
    pub golden_counts: Vec<u32>,
    /// Degree-reduction-iteration count per node at the end of the main phase.
    pub reduction_counts: Vec<u32>,
    /// Nodes still undecided after the main phase.
    pub residual: Vec<usize>,
    /// Whether the returned set is a complete MIS.
    pub complete: bool,
    pub mis_size: usize,
}

impl RunTrace {
    pub fn new(algorithm: &str, seed: u64, node_count: usize, level: TraceLevel) -> Self {
        Self {
            schema_version: TRACE_SCHEMA_VERSION,
            algorithm: algorithm.to_string(),
            seed,
            node_count,
            level,
            planned_iterations: None,
            iterations: Vec::new(),
            prelude_rounds: 0,
            main_rounds: 0,
            completion_rounds: 0,
            golden_counts: Vec::new(),
            reduction_counts: Vec::new(),
            residual: Vec::new(),
            complete: false,
            mis_size: 0,
        }
    }

    pub fn total_rounds(&self) -> u64 {
        self.prelude_rounds + self.main_rounds + self.completion_rounds
    }

    /// Nodes added to the independent set by the main phase.
    pub fn main_phase_mis(&self) -> usize {
        self.iterations.iter().map(|r| r.mis_increment).sum()
    }

    pub fn is_incomplete(&self) -> bool {
        !self.complete
    }
}
