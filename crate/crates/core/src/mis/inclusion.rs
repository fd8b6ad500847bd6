use super::{CandidateLabel, MisError, ParamProfile, WeightVector};
use crate::graph::{Graph, NodeSet};
use crate::sim::{draw_ranks, Network, RngStream};

/// The candidacy test of weighted inclusion, evaluated by one node from its
/// own rank, weight and neighbourhood desire and its neighbours' ranks and
/// weights.
#[derive(Debug, Clone, Copy)]
pub struct InclusionRule<'p> {
    profile: &'p ParamProfile,
    sqrt_tau: f64,
}

impl<'p> InclusionRule<'p> {
    pub fn new(profile: &'p ParamProfile) -> Self {
        Self {
            profile,
            sqrt_tau: profile.tau.sqrt(),
        }
    }

    pub fn profile(&self) -> &'p ParamProfile {
        self.profile
    }

    /// `i` with `a_i p < r <= a_{i+1} p`.
    pub fn interval_of(&self, r: f64, p: f64) -> Option<usize> {
        let a = &self.profile.a_seq;
        (1..=self.profile.k).find(|&i| r > a[i - 1] * p && r <= a[i] * p)
    }

    /// Lower end of `J_{v,u,i}` for a neighbour of weight `p_u`.
    pub fn exclusion_floor(&self, i: usize, p_u: f64, d_v: f64) -> f64 {
        self.profile.ell * self.profile.a(i) * p_u / d_v
    }

    /// Low-desire nodes (`d_v <= sqrt(tau)`) are candidates iff
    /// `r_v <= beta p_v`. Medium-desire nodes (`d_v <= ell`) are candidates
    /// iff `r_v` lies in some `I_{v,i}` and every neighbour's rank clears its
    /// `J_{v,u,i}` floor. High-desire nodes never are.
    ///
    /// `neighbors` yields `(r_u, p_u)` and is only consumed as far as needed.
    pub fn label<I>(&self, r_v: f64, p_v: f64, d_v: f64, neighbors: I) -> CandidateLabel
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        if d_v <= self.sqrt_tau {
            if r_v <= self.profile.beta * p_v {
                CandidateLabel::CMinus
            } else {
                CandidateLabel::NotCandidate
            }
        } else if d_v <= self.profile.ell {
            match self.interval_of(r_v, p_v) {
                Some(i) => {
                    let clear = neighbors
                        .into_iter()
                        .all(|(r_u, p_u)| r_u > self.exclusion_floor(i, p_u, d_v));
                    if clear {
                        CandidateLabel::CPlus(i)
                    } else {
                        CandidateLabel::NotCandidate
                    }
                }
                None => CandidateLabel::NotCandidate,
            }
        } else {
            CandidateLabel::NotCandidate
        }
    }
}

#[derive(Debug, Clone)]
pub struct InclusionOutcome {
    pub joined: NodeSet,
    pub removed: NodeSet,
    /// Candidate label per node; dead nodes are `NotCandidate`.
    pub labels: Vec<CandidateLabel>,
    /// `d_v` over alive neighbours as computed in round 1; `NaN` for dead nodes.
    pub total_desire: Vec<f64>,
    pub rounds: u64,
}

/// Weighted inclusion on the alive subgraph with ranks for `iteration`.
pub fn weighted_inclusion(
    g: &Graph,
    alive: &NodeSet,
    weights: &WeightVector,
    profile: &ParamProfile,
    rng: &RngStream,
    iteration: u64,
) -> Result<InclusionOutcome, MisError> {
    g.check_universe(alive)?;
    let ranks = draw_ranks(g, alive, rng, iteration, false);
    inclusion_with_ranks(g, alive, weights, profile, &ranks)
}

/// Weighted inclusion as a pure function of the rank vector. Round 1
/// exchanges `(r, p)` and fixes labels, round 2 exchanges candidacy and
/// candidates without candidate neighbours join.
pub fn inclusion_with_ranks(
    g: &Graph,
    alive: &NodeSet,
    weights: &WeightVector,
    profile: &ParamProfile,
    ranks: &[f64],
) -> Result<InclusionOutcome, MisError> {
    profile.require_intervals()?;
    g.check_universe(alive)?;
    weights.check_cap(alive, profile.tau)?;
    let rule = InclusionRule::new(profile);
    let messages: Vec<(f64, f64)> = (0..g.node_count())
        .map(|v| (ranks[v], weights.get(v)))
        .collect();
    let mut net = Network::new(g, alive.clone());
    let first = net.exchange(&messages, |view| {
        let &(r_v, p_v) = view.own();
        let d_v: f64 = view.neighbor_messages().map(|&(_, p)| p).sum();
        let label = rule.label(r_v, p_v, d_v, view.neighbor_messages().copied());
        Ok((label, d_v))
    })?;
    let mut labels = vec![CandidateLabel::NotCandidate; g.node_count()];
    let mut total_desire = vec![f64::NAN; g.node_count()];
    for (v, out) in first.into_iter().enumerate() {
        if let Some((label, d)) = out {
            labels[v] = label;
            total_desire[v] = d;
        }
    }
    let flags: Vec<bool> = labels.iter().map(|l| l.is_candidate()).collect();
    let joins = net.exchange(&flags, |view| {
        Ok(*view.own() && !view.neighbor_messages().any(|&c| c))
    })?;
    let joined = NodeSet::from_members(
        g.node_count(),
        joins
            .iter()
            .enumerate()
            .filter_map(|(v, j)| (*j == Some(true)).then_some(v)),
    );
    let removed = net.retire(&joined)?;
    Ok(InclusionOutcome {
        joined,
        removed,
        labels,
        total_desire,
        rounds: net.rounds(),
    })
}
