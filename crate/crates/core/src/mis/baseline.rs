use super::{MisError, WeightVector};
use crate::graph::{Graph, NodeSet};
use crate::sim::{draw_ranks, run_round, Network, RngStream, RoundOutcome};

/// One round of Luby's algorithm: every alive node draws a rank and joins
/// iff its rank is below all alive neighbours' ranks.
pub fn luby_step(
    g: &Graph,
    alive: &NodeSet,
    rng: &RngStream,
    iteration: u64,
) -> Result<RoundOutcome, MisError> {
    Ok(run_round(g, alive, rng, iteration, |view| {
        let r = *view.own();
        Ok(view.neighbor_messages().all(|&ru| r < ru))
    })?)
}

/// One round of Ghaffari's desire-level step. A node marks itself with
/// probability `p_v` and joins if no neighbour marked. Survivors halve `p_v`
/// when the neighbourhood desire is at least 2 and double it (capped at 1/2)
/// otherwise.
pub fn ghaffari_step(
    g: &Graph,
    alive: &NodeSet,
    weights: &WeightVector,
    rng: &RngStream,
    iteration: u64,
) -> Result<(RoundOutcome, WeightVector), MisError> {
    g.check_universe(alive)?;
    weights.check_cap(alive, 0.5)?;
    let ranks = draw_ranks(g, alive, rng, iteration, false);
    let messages: Vec<(bool, f64)> = (0..g.node_count())
        .map(|v| {
            (
                alive.contains(v) && ranks[v] < weights.get(v),
                weights.get(v),
            )
        })
        .collect();
    let mut net = Network::new(g, alive.clone());
    let decided = net.exchange(&messages, |view| {
        let &(marked, p) = view.own();
        let mut d = 0.0;
        let mut neighbour_marked = false;
        for &(m, pu) in view.neighbor_messages() {
            d += pu;
            neighbour_marked |= m;
        }
        let next = if d >= 2.0 {
            p / 2.0
        } else {
            (2.0 * p).min(0.5)
        };
        Ok((marked && !neighbour_marked, next))
    })?;
    let mut next = weights.clone();
    let mut joined = NodeSet::empty(g.node_count());
    for (v, d) in decided.into_iter().enumerate() {
        if let Some((join, p)) = d {
            next.0[v] = p;
            if join {
                joined.insert(v);
            }
        }
    }
    let removed = net.retire(&joined)?;
    Ok((RoundOutcome { joined, removed }, next))
}
