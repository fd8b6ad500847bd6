use super::{MisError, RegularIntervals};
use crate::graph::{Graph, NodeSet};
use crate::sim::{draw_ranks, Network, RngStream};

#[derive(Debug, Clone)]
pub struct TwoRoundOutcome {
    pub joined: NodeSet,
    pub removed: NodeSet,
    /// Interval index of each candidate; `None` for non-candidates and dead nodes.
    pub candidates: Vec<Option<usize>>,
    pub rounds: u64,
}

/// Two-round step for regular graphs on the alive subgraph, drawing ranks
/// for `iteration` from `rng`.
pub fn two_round_regular(
    g: &Graph,
    alive: &NodeSet,
    intervals: &RegularIntervals,
    rng: &RngStream,
    iteration: u64,
) -> Result<TwoRoundOutcome, MisError> {
    g.check_universe(alive)?;
    let ranks = draw_ranks(g, alive, rng, iteration, false);
    two_round_with_ranks(g, alive, intervals, &ranks)
}

/// The same step as a pure function of the rank vector.
///
/// Round 1: `v` is a candidate iff `r_v` lies in some `I_i` and every alive
/// neighbour's rank lies in `J_i`. Round 2: candidates with no candidate
/// neighbour join.
pub fn two_round_with_ranks(
    g: &Graph,
    alive: &NodeSet,
    intervals: &RegularIntervals,
    ranks: &[f64],
) -> Result<TwoRoundOutcome, MisError> {
    g.check_universe(alive)?;
    let mut net = Network::new(g, alive.clone());
    let labels = net.exchange(ranks, |view| {
        let r = *view.own();
        Ok(intervals.interval_of(r).filter(|&i| {
            let floor = intervals.exclusion_floor(i);
            view.neighbor_messages().all(|&ru| ru > floor)
        }))
    })?;
    let candidates: Vec<Option<usize>> = labels.into_iter().map(Option::flatten).collect();
    let flags: Vec<bool> = candidates.iter().map(Option::is_some).collect();
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
    Ok(TwoRoundOutcome {
        joined,
        removed,
        candidates,
        rounds: net.rounds(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mis::intervals_regular;

    #[test]
    fn hand_computed_ranks() {
        // delta = 1000, k = 1: I_1 = (0.005, 0.00739], J_1 = (0.005, 1].
        let iv = intervals_regular(1000, Some(1)).unwrap();
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let alive = NodeSet::full(4);
        // 0 is a candidate; 1 is in I_1 but sees 0.006 > 0.005, so it is a candidate
        // too and both are blocked; 3 is a lone candidate.
        let ranks = [0.006, 0.007, 0.9, 0.0055];
        let out = two_round_with_ranks(&g, &alive, &iv, &ranks).unwrap();
        assert_eq!(out.candidates, vec![Some(1), Some(1), None, Some(1)]);
        assert_eq!(out.joined.to_vec(), vec![3]);
        assert_eq!(out.removed.to_vec(), vec![2, 3]);
        assert_eq!(out.rounds, 2);

        // A neighbour rank at or below b_1 disqualifies.
        let ranks = [0.006, 0.004, 0.9, 0.9];
        let out = two_round_with_ranks(&g, &alive, &iv, &ranks).unwrap();
        assert_eq!(out.candidates, vec![None; 4]);
        assert!(out.joined.is_empty());
    }

    #[test]
    fn reproducible_from_seed() {
        let g = crate::graph::generate_regular_girth(200, 8, 5, 3).unwrap();
        let iv = intervals_regular(8, Some(1)).unwrap();
        let alive = NodeSet::full(200);
        let a = two_round_regular(&g, &alive, &iv, &RngStream::new(11), 0).unwrap();
        let b = two_round_regular(&g, &alive, &iv, &RngStream::new(11), 0).unwrap();
        assert_eq!(a.joined, b.joined);
        assert!(crate::graph::verify_independent(&g, &a.joined).unwrap());
    }
}
