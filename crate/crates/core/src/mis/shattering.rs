use serde::{Deserialize, Serialize};

use super::{inclusion_with_ranks, MisError, ParamProfile, WeightVector};
use crate::graph::{Graph, NodeSet};
use crate::sim::{draw_ranks, IterationRecord, NodeDetail, RngStream, RunTrace, TraceLevel};

/// Result of the pre-shattering phase.
#[derive(Debug, Clone)]
pub struct PreShattering {
    /// Nodes that joined during the phase.
    pub mis: NodeSet,
    /// Nodes still undecided after the last iteration.
    pub residual: NodeSet,
    /// Weight level `j` of every node when it was last alive, `p = tau * ell^-j`.
    pub levels: Vec<u32>,
    pub trace: RunTrace,
}

/// Golden-iteration predicate: `d_v >= 1/ell` and the desire mass of the
/// low-desire neighbours is at least `d_v / (100 ell^2)`.
pub fn is_golden(d_v: f64, low_mass: f64, ell: f64) -> bool {
    d_v >= 1.0 / ell && low_mass >= d_v / (100.0 * ell * ell)
}

/// Weight table `tau * ell^-j`, extended on demand so every value on a
/// node's trajectory is computed the same way.
struct Levels {
    tau: f64,
    ell: f64,
    values: Vec<f64>,
}

impl Levels {
    fn new(tau: f64, ell: f64) -> Self {
        Self {
            tau,
            ell,
            values: vec![tau],
        }
    }

    fn get(&mut self, j: u32) -> f64 {
        let j = j as usize;
        while self.values.len() <= j {
            let next = self.tau / self.ell.powi(self.values.len() as i32);
            self.values.push(next);
        }
        self.values[j]
    }
}

/// Pre-shattering on the whole graph.
pub fn pre_shattering(
    g: &Graph,
    profile: &ParamProfile,
    rng: &RngStream,
    level: TraceLevel,
) -> Result<PreShattering, MisError> {
    pre_shattering_from(g, &NodeSet::full(g.node_count()), profile, rng, level)
}

/// Pre-shattering on the subgraph induced by `start`.
///
/// Every node starts at weight `tau`. Iteration `t` runs weighted inclusion
/// with ranks from iteration `t` of `rng`, removes the joiners and their
/// neighbours, and moves each survivor's weight one level down if its
/// neighbourhood desire exceeded `ell` and one level up (capped at `tau`)
/// otherwise. Golden and degree-reduction flags are evaluated on the state
/// after the update. All `T` iterations run (and count two rounds each) even
/// once no node is left.
pub fn pre_shattering_from(
    g: &Graph,
    start: &NodeSet,
    profile: &ParamProfile,
    rng: &RngStream,
    level: TraceLevel,
) -> Result<PreShattering, MisError> {
    profile.require_intervals()?;
    g.check_universe(start)?;
    let n = g.node_count();
    let ell = profile.ell;
    let mut levels_table = Levels::new(profile.tau, ell);
    let mut alive = start.clone();
    let mut level_of = vec![0u32; n];
    let mut weights = WeightVector::constant(n, profile.tau);
    let mut mis = NodeSet::empty(n);
    let mut trace = RunTrace::new("pre_shattering", rng.root(), n, level);
    trace.planned_iterations = Some(profile.t_iterations);
    trace.golden_counts = vec![0; n];
    trace.reduction_counts = vec![0; n];

    let mut t = 0u64;
    while t < profile.t_iterations {
        t += 1;
        let ranks = draw_ranks(g, &alive, rng, t, false);
        let out = inclusion_with_ranks(g, &alive, &weights, profile, &ranks)?;
        for v in out.removed.iter() {
            alive.remove(v);
        }
        mis.union_with(&out.joined);

        let previous = weights.clone();
        for v in alive.iter() {
            let j = level_of[v];
            level_of[v] = if out.total_desire[v] > ell {
                if ell > 1.0 {
                    j + 1
                } else {
                    j
                }
            } else {
                j.saturating_sub(1)
            };
            weights.0[v] = levels_table.get(level_of[v]);
        }

        let mut desire_now = vec![f64::NAN; n];
        for v in alive.iter() {
            desire_now[v] = g
                .neighbors(v)
                .iter()
                .filter(|&&u| alive.contains(u))
                .map(|&u| weights.get(u))
                .sum();
        }
        let mut golden = vec![false; n];
        let mut reduction = vec![false; n];
        for v in alive.iter() {
            let low_mass: f64 = g
                .neighbors(v)
                .iter()
                .filter(|&&u| alive.contains(u) && desire_now[u] <= ell)
                .map(|&u| weights.get(u))
                .sum();
            golden[v] = is_golden(desire_now[v], low_mass, ell);
            reduction[v] = weights.get(v) == profile.tau && previous.get(v) == profile.tau;
            trace.golden_counts[v] += u32::from(golden[v]);
            trace.reduction_counts[v] += u32::from(reduction[v]);
        }

        let detail = (level == TraceLevel::Full).then(|| NodeDetail {
            desire: (0..n)
                .map(|v| alive.contains(v).then(|| weights.get(v)))
                .collect(),
            total_desire: (0..n)
                .map(|v| alive.contains(v).then(|| desire_now[v]))
                .collect(),
            golden,
            degree_reduction: reduction,
        });
        trace.iterations.push(IterationRecord {
            iteration: t,
            rounds: out.rounds,
            alive_count: alive.len(),
            alive_edges: g.induced_edge_count(&alive),
            mis_increment: out.joined.len(),
            detail,
        });
        trace.main_rounds += out.rounds;
    }

    trace.residual = alive.to_vec();
    trace.complete = alive.is_empty();
    trace.mis_size = mis.len();
    Ok(PreShattering {
        mis,
        residual: alive,
        levels: level_of,
        trace,
    })
}

/// Recomputes whether iteration `t` was golden for `v` from the weights
/// stored in a full trace. Nodes not alive after iteration `t` are never
/// golden.
pub fn classify_golden(
    g: &Graph,
    trace: &RunTrace,
    profile: &ParamProfile,
    t: u64,
    v: usize,
) -> Result<bool, MisError> {
    let record = t
        .checked_sub(1)
        .and_then(|i| trace.iterations.get(i as usize))
        .ok_or(MisError::TraceTooCoarse(t))?;
    let detail = record.detail.as_ref().ok_or(MisError::TraceTooCoarse(t))?;
    if detail.desire[v].is_none() {
        return Ok(false);
    }
    let ell = profile.ell;
    let desire = |u: usize| -> f64 {
        g.neighbors(u)
            .iter()
            .filter_map(|&w| detail.desire[w])
            .sum()
    };
    let d_v = desire(v);
    let low_mass: f64 = g
        .neighbors(v)
        .iter()
        .filter_map(|&u| detail.desire[u].map(|p| (u, p)))
        .filter(|&(u, _)| desire(u) <= ell)
        .map(|(_, p)| p)
        .sum();
    Ok(is_golden(d_v, low_mass, ell))
}

/// Residual nodes for which `T <= h + 3g + 6 log_ell(delta)` fails, where
/// `h` and `g` are the node's degree-reduction and golden counts.
pub fn lemma37_violations(trace: &RunTrace, profile: &ParamProfile) -> Vec<usize> {
    let t = trace.iterations.len() as f64;
    let slack = 6.0 * profile.log_ell_delta();
    trace
        .residual
        .iter()
        .copied()
        .filter(|&v| {
            let h = f64::from(trace.reduction_counts[v]);
            let gold = f64::from(trace.golden_counts[v]);
            t > h + 3.0 * gold + slack
        })
        .collect()
}

/// Degree of the subgraph induced by residual nodes with fewer than `T/50`
/// golden iterations, against the bounds `10 ell / tau` (warning) and
/// `1e8 ell / tau` (hard).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub nodes: usize,
    pub max_degree: usize,
    pub warn_bound: f64,
    pub hard_bound: f64,
    /// Nodes whose degree exceeds `warn_bound`.
    pub warnings: usize,
    /// Nodes whose degree exceeds `hard_bound`.
    pub violations: usize,
}

pub fn lemma310_check(g: &Graph, trace: &RunTrace, profile: &ParamProfile) -> DegreeBound {
    let t = trace.iterations.len() as f64;
    let n = g.node_count();
    let few_golden = NodeSet::from_members(
        n,
        trace
            .residual
            .iter()
            .copied()
            .filter(|&v| f64::from(trace.golden_counts[v]) < t / 50.0),
    );
    let warn_bound = 10.0 * profile.ell / profile.tau;
    let hard_bound = 1e8 * profile.ell / profile.tau;
    let degrees: Vec<usize> = few_golden
        .iter()
        .map(|v| g.induced_degree(v, &few_golden))
        .collect();
    DegreeBound {
        nodes: few_golden.len(),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        warn_bound,
        hard_bound,
        warnings: degrees.iter().filter(|&&d| d as f64 > warn_bound).count(),
        violations: degrees.iter().filter(|&&d| d as f64 > hard_bound).count(),
    }
}
