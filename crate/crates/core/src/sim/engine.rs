use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{RngStream, SimError};
use crate::graph::{Graph, NodeSet};

/// What a node may see during one synchronous round: its own published
/// message and the messages of its alive direct neighbours. Anything else
/// is a [`SimError::LocalityViolation`].
pub struct LocalView<'a, M> {
    node: usize,
    graph: &'a Graph,
    alive: &'a NodeSet,
    messages: &'a [M],
}

impl<'a, M> LocalView<'a, M> {
    pub fn id(&self) -> usize {
        self.node
    }

    pub fn own(&self) -> &'a M {
        &self.messages[self.node]
    }

    /// Alive neighbours and their messages, in ascending id order.
    pub fn neighbors(&self) -> impl Iterator<Item = (usize, &'a M)> + '_ {
        let messages = self.messages;
        self.graph
            .neighbors(self.node)
            .iter()
            .filter(|&&u| self.alive.contains(u))
            .map(move |&u| (u, &messages[u]))
    }

    pub fn neighbor_messages(&self) -> impl Iterator<Item = &'a M> + '_ {
        self.neighbors().map(|(_, m)| m)
    }

    /// Message of a specific node, which must be an alive neighbour.
    pub fn message_from(&self, other: usize) -> Result<&'a M, SimError> {
        if other == self.node {
            return Ok(self.own());
        }
        if other < self.graph.node_count()
            && self.alive.contains(other)
            && self.graph.has_edge(self.node, other)
        {
            Ok(&self.messages[other])
        } else {
            Err(SimError::LocalityViolation {
                node: self.node,
                requested: other,
            })
        }
    }

    pub fn alive_degree(&self) -> usize {
        self.neighbors().count()
    }
}

/// The communication network of one run: the graph, the alive node set and
/// a round counter. Every [`Network::exchange`] is one synchronous round.
pub struct Network<'g> {
    graph: &'g Graph,
    alive: NodeSet,
    rounds: u64,
}

impl<'g> Network<'g> {
    pub fn new(graph: &'g Graph, alive: NodeSet) -> Self {
        assert_eq!(alive.universe_size(), graph.node_count());
        Self {
            graph,
            alive,
            rounds: 0,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn alive(&self) -> &NodeSet {
        &self.alive
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    /// One synchronous round. `messages[v]` is what node `v` published at the
    /// end of the previous round; every alive node computes `f` from the
    /// snapshot. Dead nodes yield `None`.
    pub fn exchange<M, T, F>(&mut self, messages: &[M], f: F) -> Result<Vec<Option<T>>, SimError>
    where
        F: Fn(&LocalView<'_, M>) -> Result<T, SimError>,
    {
        assert_eq!(messages.len(), self.graph.node_count());
        self.rounds += 1;
        let mut out = Vec::with_capacity(messages.len());
        for v in 0..messages.len() {
            if !self.alive.contains(v) {
                out.push(None);
                continue;
            }
            let view = LocalView {
                node: v,
                graph: self.graph,
                alive: &self.alive,
                messages,
            };
            out.push(Some(f(&view)?));
        }
        Ok(out)
    }

    /// Removes `joined` and its alive neighbours; returns the removed set.
    pub fn retire(&mut self, joined: &NodeSet) -> Result<NodeSet, SimError> {
        check_joined(self.graph, &self.alive, joined)?;
        let removed = closed_neighborhood(self.graph, &self.alive, joined);
        for v in removed.iter() {
            self.alive.remove(v);
        }
        Ok(removed)
    }
}

/// `joined ∪ N(joined)`, restricted to `alive`.
pub fn closed_neighborhood(g: &Graph, alive: &NodeSet, joined: &NodeSet) -> NodeSet {
    let mut removed = NodeSet::empty(g.node_count());
    for v in joined.iter() {
        removed.insert(v);
        for &u in g.neighbors(v) {
            if alive.contains(u) {
                removed.insert(u);
            }
        }
    }
    removed
}

/// Joined nodes must be alive and pairwise non-adjacent.
pub fn check_joined(g: &Graph, alive: &NodeSet, joined: &NodeSet) -> Result<(), SimError> {
    for v in joined.iter() {
        if !alive.contains(v) {
            return Err(SimError::InvariantViolation(format!(
                "node {v} joined while not alive"
            )));
        }
        if let Some(&u) = g.neighbors(v).iter().find(|&&u| joined.contains(u)) {
            return Err(SimError::InvariantViolation(format!(
                "adjacent nodes {v} and {u} both joined"
            )));
        }
    }
    Ok(())
}

/// Uniform ranks for the alive nodes (`NaN` elsewhere). With `distinct`,
/// any two adjacent alive nodes with equal ranks redraw from further in
/// their own substreams until all neighbouring ranks differ.
pub fn draw_ranks(
    g: &Graph,
    alive: &NodeSet,
    rng: &RngStream,
    iteration: u64,
    distinct: bool,
) -> Vec<f64> {
    let mut streams: Vec<Option<rand_chacha::ChaCha8Rng>> = vec![None; g.node_count()];
    let mut ranks = vec![f64::NAN; g.node_count()];
    for v in alive.iter() {
        let mut s = rng.substream(v, iteration);
        ranks[v] = s.gen::<f64>();
        streams[v] = Some(s);
    }
    if distinct {
        loop {
            let tied: Vec<usize> = alive
                .iter()
                .filter(|&v| {
                    g.neighbors(v)
                        .iter()
                        .any(|&u| alive.contains(u) && ranks[u] == ranks[v])
                })
                .collect();
            if tied.is_empty() {
                break;
            }
            for v in tied {
                ranks[v] = streams[v]
                    .as_mut()
                    .expect("alive node has a stream")
                    .gen::<f64>();
            }
        }
    }
    ranks
}

#[derive(Debug, Clone)]
pub struct RoundOutcome {
    pub joined: NodeSet,
    pub removed: NodeSet,
}

/// One rank-based round: alive nodes draw distinct ranks, publish them, and
/// join iff `rule` accepts their local view. Checks that the joined set is
/// independent and returns it together with `joined ∪ N(joined) ∩ alive`.
pub fn run_round<F>(
    g: &Graph,
    alive: &NodeSet,
    rng: &RngStream,
    iteration: u64,
    rule: F,
) -> Result<RoundOutcome, SimError>
where
    F: Fn(&LocalView<'_, f64>) -> Result<bool, SimError>,
{
    g.check_universe(alive)?;
    let ranks = draw_ranks(g, alive, rng, iteration, true);
    let mut net = Network::new(g, alive.clone());
    let decisions = net.exchange(&ranks, rule)?;
    let joined = NodeSet::from_members(
        g.node_count(),
        decisions
            .iter()
            .enumerate()
            .filter_map(|(v, d)| (*d == Some(true)).then_some(v)),
    );
    let removed = net.retire(&joined)?;
    Ok(RoundOutcome { joined, removed })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Undecided,
    InMis,
    RemovedByNeighbor,
}

/// Per-node state of a randomized step: the rank drawn this round, the
/// desire weight, and the decision status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub rank: f64,
    pub desire: f64,
    pub status: Status,
}

/// Decision bookkeeping with monotone status transitions.
#[derive(Debug, Clone)]
pub struct Decisions {
    status: Vec<Status>,
    mis: NodeSet,
}

impl Decisions {
    pub fn new(n: usize) -> Self {
        Self {
            status: vec![Status::Undecided; n],
            mis: NodeSet::empty(n),
        }
    }

    pub fn status(&self, v: usize) -> Status {
        self.status[v]
    }

    pub fn mis(&self) -> &NodeSet {
        &self.mis
    }

    pub fn into_mis(self) -> NodeSet {
        self.mis
    }

    /// Records `joined` as in the MIS and the rest of `removed` as removed.
    pub fn apply(&mut self, joined: &NodeSet, removed: &NodeSet) -> Result<(), SimError> {
        for v in removed.iter() {
            if self.status[v] != Status::Undecided {
                return Err(SimError::InvariantViolation(format!(
                    "node {v} decided twice"
                )));
            }
            self.status[v] = if joined.contains(v) {
                self.mis.insert(v);
                Status::InMis
            } else {
                Status::RemovedByNeighbor
            };
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_named;

    fn luby_rule(view: &LocalView<'_, f64>) -> Result<bool, SimError> {
        let r = *view.own();
        Ok(view.neighbor_messages().all(|&ru| r < ru))
    }

    #[test]
    fn isolated_node_joins() {
        let g = Graph::empty(1);
        let out = run_round(&g, &NodeSet::full(1), &RngStream::new(1), 0, luby_rule).unwrap();
        assert_eq!(out.joined.to_vec(), vec![0]);
        assert_eq!(out.removed.to_vec(), vec![0]);
    }

    #[test]
    fn empty_alive_set() {
        let g = load_named("cycle(5)").unwrap();
        let out = run_round(&g, &NodeSet::empty(5), &RngStream::new(1), 0, luby_rule).unwrap();
        assert!(out.joined.is_empty() && out.removed.is_empty());
    }

    #[test]
    fn k2_exactly_one_endpoint_joins() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        for seed in 0..200 {
            let rng = RngStream::new(seed);
            let out = run_round(&g, &NodeSet::full(2), &rng, 0, luby_rule).unwrap();
            assert_eq!(out.joined.len(), 1);
            assert_eq!(out.removed.len(), 2);
            let winner = if rng.rank(0, 0) < rng.rank(1, 0) {
                0
            } else {
                1
            };
            assert!(out.joined.contains(winner));
        }
    }

    #[test]
    fn distance_two_read_is_a_locality_violation() {
        let g = load_named("path(3)").unwrap();
        let err = run_round(&g, &NodeSet::full(3), &RngStream::new(3), 0, |view| {
            if view.id() == 0 {
                view.message_from(2)?;
            }
            Ok(false)
        })
        .unwrap_err();
        assert!(matches!(
            err,
            SimError::LocalityViolation {
                node: 0,
                requested: 2
            }
        ));
    }

    #[test]
    fn dead_neighbour_is_invisible() {
        let g = load_named("path(3)").unwrap();
        let alive = NodeSet::from_members(3, [0, 1]);
        let ranks = vec![0.1, 0.2, 0.3];
        let mut net = Network::new(&g, alive);
        let seen = net
            .exchange(&ranks, |view| {
                if view.id() == 1 {
                    assert!(view.message_from(2).is_err());
                }
                Ok(view.alive_degree())
            })
            .unwrap();
        assert_eq!(seen, vec![Some(1), Some(1), None]);
        assert_eq!(net.rounds(), 1);
    }

    #[test]
    fn dependent_join_is_rejected() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let err = run_round(&g, &NodeSet::full(2), &RngStream::new(0), 0, |_| Ok(true));
        assert!(matches!(err, Err(SimError::InvariantViolation(_))));
    }

    #[test]
    fn decisions_are_monotone() {
        let mut d = Decisions::new(3);
        let joined = NodeSet::from_members(3, [0]);
        let removed = NodeSet::from_members(3, [0, 1]);
        d.apply(&joined, &removed).unwrap();
        assert_eq!(d.status(0), Status::InMis);
        assert_eq!(d.status(1), Status::RemovedByNeighbor);
        assert_eq!(d.status(2), Status::Undecided);
        assert!(d.apply(&NodeSet::empty(3), &removed).is_err());
    }

    #[test]
    fn forced_ties_are_resampled() {
        // With distinct ranks every edge of a clique sees different values.
        let g = load_named("complete(6)").unwrap();
        let ranks = draw_ranks(&g, &NodeSet::full(6), &RngStream::new(4), 0, true);
        for (u, v) in g.edges() {
            assert_ne!(ranks[u], ranks[v]);
        }
    }
}
