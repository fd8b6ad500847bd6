use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    completion, ghaffari_step, intervals_regular, luby_step, pre_shattering, pre_shattering_from,
    two_round_regular, weighted_inclusion, MisError, ParamProfile, ProfileMode, WeightVector,
};
use crate::graph::{verify_independent, verify_maximal_independent, Graph, NodeSet};
use crate::sim::{draw_ranks, IterationRecord, Network, RngStream, RunTrace, SimError, TraceLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Luby,
    Ghaffari,
    TwoRoundRegular,
    Inclusion,
    PreShattering,
    /// Pre-shattering followed by the deterministic completion.
    Full,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Luby,
        Algorithm::Ghaffari,
        Algorithm::TwoRoundRegular,
        Algorithm::Inclusion,
        Algorithm::PreShattering,
        Algorithm::Full,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Luby => "luby",
            Algorithm::Ghaffari => "ghaffari",
            Algorithm::TwoRoundRegular => "two_round_regular",
            Algorithm::Inclusion => "inclusion",
            Algorithm::PreShattering => "pre_shattering",
            Algorithm::Full => "full",
        }
    }

    pub fn needs_profile(self) -> bool {
        !matches!(self, Algorithm::Luby | Algorithm::Ghaffari)
    }

    /// Whether the algorithm runs until every node is decided (and so treats
    /// its iteration cap as an error).
    pub fn runs_to_completion(self) -> bool {
        matches!(
            self,
            Algorithm::Luby | Algorithm::Ghaffari | Algorithm::Full
        )
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = MisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| MisError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Iteration cap; see [`default_iteration_cap`].
    pub max_iterations: Option<u64>,
    pub level: TraceLevel,
}

/// `10 * (ceil(log2 n) + 10)`.
pub fn default_iteration_cap(n: usize) -> u64 {
    let log = (n.max(1) as f64).log2().ceil() as u64;
    10 * (log + 10)
}

/// Runs `algo` from seed `seed`. Luby and Ghaffari iterate until every node
/// is decided and fail with `IterationCapExceeded` past the cap. The
/// two-round and inclusion steps are iterated up to the cap and may leave
/// undecided nodes. Pre-shattering runs its `T` iterations; `full` adds the
/// completion, whose cap defaults to the node count.
pub fn run_algorithm(
    g: &Graph,
    algo: Algorithm,
    profile: Option<&ParamProfile>,
    seed: u64,
    opts: &RunOptions,
) -> Result<(NodeSet, RunTrace), MisError> {
    let n = g.node_count();
    let rng = RngStream::new(seed);
    let cap = opts
        .max_iterations
        .unwrap_or_else(|| default_iteration_cap(n));
    let profile = || {
        profile
            .ok_or_else(|| MisError::InvalidConstants(format!("{algo} needs a parameter profile")))
    };
    let (mis, mut trace) = match algo {
        Algorithm::Luby => iterate(g, algo, seed, cap, opts.level, |alive, t| {
            let out = luby_step(g, alive, &rng, t)?;
            Ok((out.joined, out.removed, 1))
        })?,
        Algorithm::Ghaffari => {
            let mut weights = WeightVector::constant(n, 0.5);
            iterate(g, algo, seed, cap, opts.level, |alive, t| {
                let (out, next) = ghaffari_step(g, alive, &weights, &rng, t)?;
                weights = next;
                Ok((out.joined, out.removed, 1))
            })?
        }
        Algorithm::TwoRoundRegular => {
            let p = profile()?;
            let override_k = (p.mode != ProfileMode::PaperDefault).then_some(p.k_requested);
            let intervals = intervals_regular(p.delta, override_k)?;
            iterate(g, algo, seed, cap, opts.level, |alive, t| {
                let out = two_round_regular(g, alive, &intervals, &rng, t)?;
                Ok((out.joined, out.removed, out.rounds))
            })?
        }
        Algorithm::Inclusion => {
            let p = profile()?;
            p.require_intervals()?;
            let weights = WeightVector::constant(n, p.tau);
            iterate(g, algo, seed, cap, opts.level, |alive, t| {
                let out = weighted_inclusion(g, alive, &weights, p, &rng, t)?;
                Ok((out.joined, out.removed, out.rounds))
            })?
        }
        Algorithm::PreShattering => {
            let out = pre_shattering(g, profile()?, &rng, opts.level)?;
            (out.mis, out.trace)
        }
        Algorithm::Full => run_full_mis(g, profile()?, seed, opts)?,
    };
    trace.algorithm = algo.as_str().to_string();
    finish(g, &mis, &mut trace)?;
    Ok((mis, trace))
}

/// Pre-shattering followed by the completion on the residual graph.
pub fn run_full_mis(
    g: &Graph,
    profile: &ParamProfile,
    seed: u64,
    opts: &RunOptions,
) -> Result<(NodeSet, RunTrace), MisError> {
    let rng = RngStream::new(seed);
    let pre = pre_shattering(g, profile, &rng, opts.level)?;
    let mut trace = pre.trace;
    let cap = opts.max_iterations.unwrap_or(g.node_count() as u64);
    let mut mis = pre.mis;
    mis.union_with(&completion(g, &pre.residual, cap, &mut trace)?);
    trace.algorithm = Algorithm::Full.as_str().to_string();
    trace.complete = true;
    finish(g, &mis, &mut trace)?;
    Ok((mis, trace))
}

/// Tree pipeline: an optional degree-capping pass, then pre-shattering and
/// completion on what is left.
///
/// The capping pass runs Luby rounds among alive nodes whose alive degree
/// exceeds `degree_cap` (a joiner also removes its low-degree neighbours)
/// until no such node remains. Its rounds are reported as prelude rounds.
pub fn run_tree_mis(
    g: &Graph,
    profile: &ParamProfile,
    seed: u64,
    degree_cap: Option<usize>,
    opts: &RunOptions,
) -> Result<(NodeSet, RunTrace), MisError> {
    let n = g.node_count();
    let rng = RngStream::new(seed);
    let mut alive = NodeSet::full(n);
    let mut mis = NodeSet::empty(n);
    let mut prelude_rounds = 0;
    if let Some(cap) = degree_cap {
        let limit = default_iteration_cap(n);
        let mut round = 0u64;
        loop {
            let high: Vec<bool> = (0..n)
                .map(|v| alive.contains(v) && g.induced_degree(v, &alive) > cap)
                .collect();
            if !high.iter().any(|&h| h) {
                break;
            }
            round += 1;
            if round > limit {
                return Err(SimError::IterationCapExceeded { cap: limit }.into());
            }
            // Separate iteration range so these draws never reuse pre-shattering ones.
            let ranks = draw_ranks(g, &alive, &rng, (1 << 40) + round, true);
            let messages: Vec<(f64, bool)> = ranks.into_iter().zip(high).collect();
            let mut net = Network::new(g, alive.clone());
            let joins = net.exchange(&messages, |view| {
                let &(r, h) = view.own();
                Ok(h && view
                    .neighbor_messages()
                    .filter(|m| m.1)
                    .all(|&(ru, _)| r < ru))
            })?;
            let joined = NodeSet::from_members(
                n,
                joins
                    .iter()
                    .enumerate()
                    .filter_map(|(v, j)| (*j == Some(true)).then_some(v)),
            );
            let removed = net.retire(&joined)?;
            prelude_rounds += net.rounds();
            for v in removed.iter() {
                alive.remove(v);
            }
            mis.union_with(&joined);
        }
    }
    let pre = pre_shattering_from(g, &alive, profile, &rng, opts.level)?;
    let mut trace = pre.trace;
    trace.prelude_rounds = prelude_rounds;
    mis.union_with(&pre.mis);
    let cap = opts.max_iterations.unwrap_or(n as u64);
    mis.union_with(&completion(g, &pre.residual, cap, &mut trace)?);
    trace.algorithm = "tree".to_string();
    trace.complete = true;
    finish(g, &mis, &mut trace)?;
    Ok((mis, trace))
}

/// Repeats `step` (which returns joined, removed and rounds used) on the
/// alive set, one iteration index per step, until no node is alive or `cap`
/// iterations have run.
fn iterate<F>(
    g: &Graph,
    algo: Algorithm,
    seed: u64,
    cap: u64,
    level: TraceLevel,
    mut step: F,
) -> Result<(NodeSet, RunTrace), MisError>
where
    F: FnMut(&NodeSet, u64) -> Result<(NodeSet, NodeSet, u64), MisError>,
{
    let n = g.node_count();
    let mut trace = RunTrace::new(algo.as_str(), seed, n, level);
    let mut alive = NodeSet::full(n);
    let mut mis = NodeSet::empty(n);
    let mut t = 0;
    while !alive.is_empty() {
        if t == cap {
            if algo.runs_to_completion() {
                return Err(SimError::IterationCapExceeded { cap }.into());
            }
            break;
        }
        t += 1;
        let (joined, removed, rounds) = step(&alive, t)?;
        for v in removed.iter() {
            alive.remove(v);
        }
        mis.union_with(&joined);
        trace.main_rounds += rounds;
        trace.iterations.push(IterationRecord {
            iteration: t,
            rounds,
            alive_count: alive.len(),
            alive_edges: g.induced_edge_count(&alive),
            mis_increment: joined.len(),
            detail: None,
        });
    }
    trace.residual = alive.to_vec();
    trace.complete = alive.is_empty();
    Ok((mis, trace))
}

fn finish(g: &Graph, mis: &NodeSet, trace: &mut RunTrace) -> Result<(), MisError> {
    trace.mis_size = mis.len();
    let ok = if trace.complete {
        verify_maximal_independent(g, mis)?
    } else {
        verify_independent(g, mis)?
    };
    if !ok {
        return Err(SimError::InvariantViolation(format!(
            "{} returned a set that is not {}",
            trace.algorithm,
            if trace.complete {
                "a maximal independent set"
            } else {
                "independent"
            }
        ))
        .into());
    }
    Ok(())
}
