use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probe::{InclusionProbe, LazyRanks, LubyProbe, TwoRoundProbe};
use super::{AnalysisError, BoundDirection, EstimateReport, Verdict};
use crate::graph::{components, generate_bipartite_regular, Graph, NodeSet};
use crate::mis::{
    ghaffari_step, intervals_regular, is_golden, lemma310_check, lemma37_violations, luby_step,
    pre_shattering, run_algorithm, two_round_regular, weighted_inclusion, Algorithm,
    CandidateLabel, InclusionRule, MisError, ParamProfile, ProfileMode, RunOptions, WeightVector,
};
use crate::sim::{RngStream, RunTrace, TraceLevel};

/// Fewest trials a Monte-Carlo estimate accepts.
pub const MIN_TRIALS: u64 = 100;
/// Conditioning events needed before a conditional estimate gets a verdict.
pub const MIN_CONDITIONING_EVENTS: u64 = 200;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;

/// Trial count, root seed and confidence level shared by the estimators.
/// Trial `t` draws from `RngStream::new(seed).for_trial(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
}

impl EstimateConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            confidence: DEFAULT_CONFIDENCE,
        }
    }

    fn check(&self) -> Result<(), AnalysisError> {
        if self.trials < MIN_TRIALS {
            return Err(AnalysisError::TooFewTrials {
                trials: self.trials,
                minimum: MIN_TRIALS,
            });
        }
        Ok(())
    }
}

/// Runs the trials in parallel and sums `counters` per trial. `init` builds
/// per-worker scratch. Integer sums make the result independent of the
/// thread schedule.
pub fn tally<S: Send, I, F>(
    cfg: &EstimateConfig,
    counters: usize,
    init: I,
    trial: F,
) -> Result<Vec<u64>, AnalysisError>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64, RngStream, &mut [u64]) -> Result<(), AnalysisError> + Sync + Send,
{
    cfg.check()?;
    tally_runs(cfg, counters, init, trial)
}

/// [`tally`] without the minimum-trial rule, for deterministic checks.
fn tally_runs<S: Send, I, F>(
    cfg: &EstimateConfig,
    counters: usize,
    init: I,
    trial: F,
) -> Result<Vec<u64>, AnalysisError>
where
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, u64, RngStream, &mut [u64]) -> Result<(), AnalysisError> + Sync + Send,
{
    let root = RngStream::new(cfg.seed);
    (0..cfg.trials)
        .into_par_iter()
        .try_fold(
            || (init(), vec![0u64; counters]),
            |(mut scratch, mut counts), t| {
                trial(&mut scratch, t, root.for_trial(t), &mut counts)?;
                Ok::<_, AnalysisError>((scratch, counts))
            },
        )
        .map(|r| r.map(|(_, counts)| counts))
        .try_reduce(
            || vec![0u64; counters],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
}

/// Estimates the probability of a per-trial event.
pub fn estimate<F>(
    name: impl Into<String>,
    cfg: &EstimateConfig,
    target: Option<f64>,
    direction: BoundDirection,
    event: F,
) -> Result<EstimateReport, AnalysisError>
where
    F: Fn(u64, &RngStream) -> Result<bool, AnalysisError> + Sync + Send,
{
    let counts = tally(
        cfg,
        1,
        || (),
        |_, t, rng, c| {
            c[0] += u64::from(event(t, &rng)?);
            Ok(())
        },
    )?;
    Ok(EstimateReport::from_counts(
        name,
        counts[0],
        cfg.trials,
        cfg.confidence,
        target,
        direction,
    ))
}

/// Events at a probe node after one step of an algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeEvent {
    /// The probe joins the independent set.
    Joins,
    /// The probe or a neighbour joins.
    Deleted,
    /// The probe becomes a candidate (two-round and inclusion steps only).
    Candidate,
}

/// Node of maximum degree with the smallest id.
pub fn select_probe(g: &Graph) -> Option<usize> {
    (0..g.node_count()).max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
}

/// Probability of `event` at `probe` when `algo` runs one step from scratch
/// (ranks of iteration 1 of the trial stream). The baselines and the
/// two-round step run one round on the whole graph, inclusion uses constant
/// weights `tau`, and the multi-iteration algorithms run to the end with the
/// trial root as seed (`Deleted` then means "not left undecided").
#[allow(clippy::too_many_arguments)]
pub fn estimate_event(
    g: &Graph,
    algo: Algorithm,
    profile: Option<&ParamProfile>,
    probe: usize,
    event: ProbeEvent,
    cfg: &EstimateConfig,
    target: Option<f64>,
    direction: BoundDirection,
) -> Result<EstimateReport, AnalysisError> {
    let n = g.node_count();
    if probe >= n {
        return Err(AnalysisError::Unsupported(format!(
            "probe {probe} is not a node"
        )));
    }
    let all = NodeSet::full(n);
    let need_profile =
        || profile.ok_or_else(|| AnalysisError::Unsupported(format!("{algo} needs a profile")));
    let intervals = match algo {
        Algorithm::TwoRoundRegular => {
            let p = need_profile()?;
            let k = (p.mode != ProfileMode::PaperDefault).then_some(p.k_requested);
            Some(intervals_regular(p.delta, k)?)
        }
        _ => None,
    };
    let candidate_allowed = matches!(algo, Algorithm::TwoRoundRegular | Algorithm::Inclusion);
    if event == ProbeEvent::Candidate && !candidate_allowed {
        return Err(AnalysisError::Unsupported(format!(
            "{algo} has no candidates"
        )));
    }
    if algo == Algorithm::Inclusion {
        need_profile()?
            .require_intervals()
            .map_err(AnalysisError::from)?;
    }
    let name = format!("event/{algo}/{}/probe={probe}", event_name(event));
    estimate(name, cfg, target, direction, |_, rng| {
        let hit = match algo {
            Algorithm::Luby => {
                let out = luby_step(g, &all, rng, 1)?;
                outcome(event, &out.joined, &out.removed, false, probe)
            }
            Algorithm::Ghaffari => {
                let w = WeightVector::constant(n, 0.5);
                let (out, _) = ghaffari_step(g, &all, &w, rng, 1)?;
                outcome(event, &out.joined, &out.removed, false, probe)
            }
            Algorithm::TwoRoundRegular => {
                let iv = intervals.as_ref().expect("intervals built above");
                let out = two_round_regular(g, &all, iv, rng, 1)?;
                let cand = out.candidates[probe].is_some();
                outcome(event, &out.joined, &out.removed, cand, probe)
            }
            Algorithm::Inclusion => {
                let p = need_profile()?;
                let w = WeightVector::constant(n, p.tau);
                let out = weighted_inclusion(g, &all, &w, p, rng, 1)?;
                let cand = out.labels[probe].is_candidate();
                outcome(event, &out.joined, &out.removed, cand, probe)
            }
            Algorithm::PreShattering | Algorithm::Full => {
                let (mis, trace) =
                    run_algorithm(g, algo, profile, rng.root(), &RunOptions::default())?;
                match event {
                    ProbeEvent::Joins => mis.contains(probe),
                    ProbeEvent::Deleted => !trace.residual.contains(&probe),
                    ProbeEvent::Candidate => unreachable!("rejected above"),
                }
            }
        };
        Ok(hit)
    })
}

fn event_name(e: ProbeEvent) -> &'static str {
    match e {
        ProbeEvent::Joins => "joins",
        ProbeEvent::Deleted => "deleted",
        ProbeEvent::Candidate => "candidate",
    }
}

fn outcome(e: ProbeEvent, joined: &NodeSet, removed: &NodeSet, cand: bool, v: usize) -> bool {
    match e {
        ProbeEvent::Joins => joined.contains(v),
        ProbeEvent::Deleted => removed.contains(v),
        ProbeEvent::Candidate => cand,
    }
}

/// Per-interval bounds of the two-round regular step on a `delta`-regular
/// bipartite graph with `2 delta` nodes per side (built from `cfg.seed`):
/// `Pr[v in C_i] >= 1/(2 e^4 delta)`, `Pr[v joins | v in C_i] >= 1/5` and
/// `Pr[v joins] >= k/(10^4 delta)` with `k` the effective interval count.
pub fn check_lemma31_bounds(
    delta: usize,
    k: usize,
    cfg: &EstimateConfig,
) -> Result<Vec<EstimateReport>, AnalysisError> {
    let g = generate_bipartite_regular(2 * delta, delta, cfg.seed)?;
    check_lemma31_on(&g, delta, k, cfg)
}

/// As [`check_lemma31_bounds`] on a given `delta`-regular graph, probing
/// node 0 lazily.
pub fn check_lemma31_on(
    g: &Graph,
    delta: usize,
    k: usize,
    cfg: &EstimateConfig,
) -> Result<Vec<EstimateReport>, AnalysisError> {
    let intervals = intervals_regular(delta, Some(k))?;
    let k_eff = intervals.k;
    let probe = select_probe(g).ok_or(AnalysisError::Unsupported("empty graph".into()))?;
    let evaluator = TwoRoundProbe {
        g,
        intervals: &intervals,
    };
    let n = g.node_count();
    // Counters: [joined, cand_1, join_1, cand_2, join_2, ...].
    let counts = tally(
        cfg,
        1 + 2 * k_eff,
        || LazyRanks::new(n),
        |ranks, _, rng, c| {
            ranks.reset(rng, 1);
            let (cand, joined) = evaluator.joins(ranks, probe);
            c[0] += u64::from(joined);
            if let Some(i) = cand {
                c[2 * i - 1] += 1;
                c[2 * i] += u64::from(joined);
            }
            Ok(())
        },
    )?;
    let d = delta as f64;
    let conf = cfg.confidence;
    let mut reports = Vec::new();
    for i in 1..=k_eff {
        let (cand, join) = (counts[2 * i - 1], counts[2 * i]);
        reports.push(EstimateReport::from_counts(
            format!("lemma31/delta={delta}/candidate/i={i}"),
            cand,
            cfg.trials,
            conf,
            Some(1.0 / (2.0 * 4f64.exp() * d)),
            BoundDirection::AtLeast,
        ));
        let conditional = EstimateReport::from_counts(
            format!("lemma31/delta={delta}/join_given_candidate/i={i}"),
            join,
            cand,
            conf,
            Some(0.2),
            BoundDirection::AtLeast,
        );
        reports.push(if cand < MIN_CONDITIONING_EVENTS {
            conditional.inconclusive()
        } else {
            conditional
        });
    }
    reports.push(EstimateReport::from_counts(
        format!("lemma31/delta={delta}/total"),
        counts[0],
        cfg.trials,
        conf,
        Some(k_eff as f64 / (1e4 * d)),
        BoundDirection::AtLeast,
    ));
    Ok(reports)
}

/// Low-desire probe gadget: probe 0 with `leaves` neighbours of weight
/// `leaf_weight`, each leaf with `host_degree` further neighbours of weight
/// `host_weight`. The graph is a tree, so triangle-free.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gadget {
    pub probe_weight: f64,
    pub leaves: usize,
    pub leaf_weight: f64,
    pub host_degree: usize,
    pub host_weight: f64,
}

impl Gadget {
    pub fn build(&self) -> (Graph, WeightVector) {
        let n = 1 + self.leaves * (1 + self.host_degree);
        let mut edges = Vec::with_capacity(n - 1);
        let mut weights = vec![self.probe_weight];
        let mut next = 1 + self.leaves;
        for leaf in 1..=self.leaves {
            edges.push((0, leaf));
            weights.push(self.leaf_weight);
        }
        for leaf in 1..=self.leaves {
            for _ in 0..self.host_degree {
                edges.push((leaf, next));
                next += 1;
            }
        }
        weights.resize(n, self.host_weight);
        let g = Graph::from_edges(n, edges).expect("gadget is a simple tree");
        (g, WeightVector(weights))
    }

    pub fn probe_desire(&self) -> f64 {
        self.leaves as f64 * self.leaf_weight
    }
}

/// `Pr[probe joins] >= beta p_v / 100` for a probe with `d_v <= sqrt(tau)`
/// after one weighted inclusion step.
pub fn check_lemma32_case1(
    profile: &ParamProfile,
    gadget: &Gadget,
    cfg: &EstimateConfig,
) -> Result<EstimateReport, AnalysisError> {
    profile.require_intervals()?;
    if gadget.probe_desire() > profile.tau.sqrt() {
        return Err(AnalysisError::BadGadget(format!(
            "probe desire {} exceeds sqrt(tau) = {}",
            gadget.probe_desire(),
            profile.tau.sqrt()
        )));
    }
    let (g, weights) = gadget.build();
    weights.check_cap(&NodeSet::full(g.node_count()), profile.tau)?;
    let evaluator = InclusionProbe::new(&g, InclusionRule::new(profile), &weights.0);
    let n = g.node_count();
    let counts = tally(
        cfg,
        1,
        || LazyRanks::new(n),
        |ranks, _, rng, c| {
            ranks.reset(rng, 1);
            c[0] += u64::from(evaluator.joins(ranks, 0).1);
            Ok(())
        },
    )?;
    Ok(EstimateReport::from_counts(
        "lemma32/case1/probe_joins",
        counts[0],
        cfg.trials,
        cfg.confidence,
        Some(profile.beta * gadget.probe_weight / 100.0),
        BoundDirection::AtLeast,
    ))
}

/// Nodes satisfying both good-node conditions for the given weights:
/// `d_v >= 1/ell` and enough desire mass on neighbours with `d_u <= ell`.
pub fn good_nodes(g: &Graph, weights: &[f64], ell: f64) -> Vec<usize> {
    let n = g.node_count();
    let desire: Vec<f64> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&u| weights[u]).sum())
        .collect();
    (0..n)
        .filter(|&v| {
            let low_mass: f64 = g
                .neighbors(v)
                .iter()
                .filter(|&&u| desire[u] <= ell)
                .map(|&u| weights[u])
                .sum();
            is_golden(desire[v], low_mass, ell)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurvivalAlgo {
    Luby,
    Inclusion,
}

/// Deletion probability (probe joins or gains a joined neighbour) after
/// one step, averaged over a probe class by rotating the probe with the
/// trial index. Luby probes every node; inclusion probes the good nodes
/// for `weights` (constant `tau` when `None`).
pub fn check_survival(
    g: &Graph,
    algo: SurvivalAlgo,
    profile: Option<&ParamProfile>,
    weights: Option<&WeightVector>,
    cfg: &EstimateConfig,
    target: Option<f64>,
    direction: BoundDirection,
) -> Result<EstimateReport, AnalysisError> {
    let n = g.node_count();
    match algo {
        SurvivalAlgo::Luby => {
            if n == 0 {
                return Err(AnalysisError::NoGoodNodes);
            }
            let evaluator = LubyProbe { g };
            let counts = tally(
                cfg,
                1,
                || LazyRanks::new(n),
                |ranks, t, rng, c| {
                    ranks.reset(rng, 1);
                    c[0] += u64::from(evaluator.deleted(ranks, (t % n as u64) as usize));
                    Ok(())
                },
            )?;
            Ok(EstimateReport::from_counts(
                "survival/luby/deleted",
                counts[0],
                cfg.trials,
                cfg.confidence,
                target,
                direction,
            ))
        }
        SurvivalAlgo::Inclusion => {
            let p = profile.ok_or_else(|| {
                AnalysisError::Unsupported("inclusion survival needs a profile".into())
            })?;
            p.require_intervals()?;
            let w = weights
                .cloned()
                .unwrap_or_else(|| WeightVector::constant(n, p.tau));
            w.check_cap(&NodeSet::full(n), p.tau)?;
            let class = good_nodes(g, &w.0, p.ell);
            if class.is_empty() {
                return Err(AnalysisError::NoGoodNodes);
            }
            let evaluator = InclusionProbe::new(g, InclusionRule::new(p), &w.0);
            let counts = tally(
                cfg,
                1,
                || LazyRanks::new(n),
                |ranks, t, rng, c| {
                    ranks.reset(rng, 1);
                    let v = class[(t % class.len() as u64) as usize];
                    c[0] += u64::from(evaluator.deleted(ranks, v));
                    Ok(())
                },
            )?;
            Ok(EstimateReport::from_counts(
                format!("survival/inclusion/k={}/deleted", p.k),
                counts[0],
                cfg.trials,
                cfg.confidence,
                target,
                direction,
            ))
        }
    }
}

/// One full Luby round per trial; a deletion report per node against the
/// common `target`.
pub fn luby_deletion_per_node(
    g: &Graph,
    cfg: &EstimateConfig,
    target: Option<f64>,
) -> Result<Vec<EstimateReport>, AnalysisError> {
    let n = g.node_count();
    let all = NodeSet::full(n);
    let counts = tally(
        cfg,
        n,
        || (),
        |_, _, rng, c| {
            let out = luby_step(g, &all, &rng, 1)?;
            for v in out.removed.iter() {
                c[v] += 1;
            }
            Ok(())
        },
    )?;
    Ok((0..n)
        .map(|v| {
            EstimateReport::from_counts(
                format!("luby/deleted/node={v}"),
                counts[v],
                cfg.trials,
                cfg.confidence,
                target,
                BoundDirection::AtLeast,
            )
        })
        .collect())
}

/// Weight levels drawn per trial for the label-agreement check: `p_v =
/// tau 2^-j` with `j` uniform in `0..4` from word 0 of node `v`'s stream.
fn dyadic_weights(n: usize, tau: f64, rng: &RngStream) -> WeightVector {
    use rand::Rng;
    WeightVector(
        (0..n)
            .map(|v| tau * 0.5f64.powi(rng.substream(v, 0).gen_range(0..4)))
            .collect(),
    )
}

/// Adjacent candidates after one weighted inclusion step carry the same
/// label: both `C-`, or both `C+` with the same interval. Each of
/// `cfg.trials` invocations draws fresh dyadic weights and ranks.
pub fn check_prop33(
    g: &Graph,
    profile: &ParamProfile,
    cfg: &EstimateConfig,
) -> Result<LabelAgreement, AnalysisError> {
    profile.require_intervals()?;
    let n = g.node_count();
    let all = NodeSet::full(n);
    let counts = tally_runs(
        cfg,
        4,
        || (),
        |_, _, rng, c| {
            let w = dyadic_weights(n, profile.tau, &rng);
            let out = weighted_inclusion(g, &all, &w, profile, &rng, 1)?;
            let bad = g
                .edges()
                .filter(|&(u, v)| {
                    let (a, b) = (out.labels[u], out.labels[v]);
                    a.is_candidate() && b.is_candidate() && a != b
                })
                .count() as u64;
            c[0] += u64::from(bad == 0);
            c[1] += bad;
            for label in &out.labels {
                match label {
                    CandidateLabel::CMinus => c[2] += 1,
                    CandidateLabel::CPlus(_) => c[3] += 1,
                    CandidateLabel::NotCandidate => {}
                }
            }
            Ok(())
        },
    )?;
    Ok(LabelAgreement {
        report: EstimateReport::deterministic("prop33/label_agreement", counts[0], cfg.trials),
        mismatched_edges: counts[1],
        c_minus: counts[2],
        c_plus: counts[3],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelAgreement {
    /// Invocations without a mismatching edge.
    pub report: EstimateReport,
    pub mismatched_edges: u64,
    /// Candidate labels seen over all invocations.
    pub c_minus: u64,
    pub c_plus: u64,
}

/// Runs pre-shattering `cfg.trials` times (seed of run `t` is the trial
/// root) and reports the runs free of violations of the surviving-node
/// iteration budget and of the hard residual degree bound `1e8 ell/tau`.
/// The strict bound `10 ell/tau` is reported too; exceeding it only makes
/// that report inconclusive.
pub fn check_shattering_lemmas(
    g: &Graph,
    profile: &ParamProfile,
    cfg: &EstimateConfig,
) -> Result<Vec<EstimateReport>, AnalysisError> {
    let counts = tally_runs(
        cfg,
        3,
        || (),
        |_, _, rng, c| {
            let out = pre_shattering(g, profile, &rng, TraceLevel::Summary)?;
            c[0] += u64::from(lemma37_violations(&out.trace, profile).is_empty());
            let bound = lemma310_check(g, &out.trace, profile);
            c[1] += u64::from(bound.violations == 0);
            c[2] += u64::from(bound.warnings == 0);
            Ok(())
        },
    )?;
    let strict =
        EstimateReport::deterministic("lemma310/strict_degree_bound", counts[2], cfg.trials);
    let strict = if strict.verdict == Verdict::Fail {
        strict.inconclusive()
    } else {
        strict
    };
    Ok(vec![
        EstimateReport::deterministic("lemma37/iteration_budget", counts[0], cfg.trials),
        EstimateReport::deterministic("lemma310/degree_bound", counts[1], cfg.trials),
        strict,
    ])
}

/// How the residual graph of a pre-shattering run splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShatterReport {
    pub residual_size: usize,
    /// Residual nodes with at least `T/50` golden iterations.
    pub golden_part_size: usize,
    /// The remaining residual nodes.
    pub degree_part_size: usize,
    pub max_component_golden: usize,
    pub max_degree_nongolden: usize,
    pub lemma37_violations: usize,
    /// Nodes of the degree part above `1e8 ell / tau`.
    pub lemma310_violations: usize,
    /// Nodes of the degree part above `10 ell / tau`.
    pub lemma310_warnings: usize,
}

pub fn shatter_report(
    g: &Graph,
    trace: &RunTrace,
    profile: &ParamProfile,
) -> Result<ShatterReport, AnalysisError> {
    let n = g.node_count();
    if trace.golden_counts.len() != n || trace.reduction_counts.len() != n {
        return Err(MisError::TraceTooCoarse(trace.iterations.len() as u64).into());
    }
    let t = trace.iterations.len() as f64;
    let golden = NodeSet::from_members(
        n,
        trace
            .residual
            .iter()
            .copied()
            .filter(|&v| f64::from(trace.golden_counts[v]) >= t / 50.0),
    );
    let degree_bound = lemma310_check(g, trace, profile);
    let max_component_golden = components(g, &golden)?
        .iter()
        .map(NodeSet::len)
        .max()
        .unwrap_or(0);
    Ok(ShatterReport {
        residual_size: trace.residual.len(),
        golden_part_size: golden.len(),
        degree_part_size: degree_bound.nodes,
        max_component_golden,
        max_degree_nongolden: degree_bound.max_degree,
        lemma37_violations: lemma37_violations(trace, profile).len(),
        lemma310_violations: degree_bound.violations,
        lemma310_warnings: degree_bound.warnings,
    })
}
