//! Simple undirected graphs and the structural checks every algorithm relies on.

mod generate;
mod girth;
mod named;

pub use generate::{
    generate_bipartite_regular, generate_regular_girth, generate_regular_girth_with_budget,
    generate_tree, DEFAULT_SWAP_BUDGET,
};
pub use girth::{girth, Girth, GirthReport};
pub use named::{load_named, NAMED_FIXTURES};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("n*d must be even (n={n}, d={d})")]
    BadArity { n: usize, d: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("unknown named graph `{0}`")]
    UnknownName(String),
    #[error("node set over {got} nodes used with a graph of {expected} nodes")]
    UniverseMismatch { expected: usize, got: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {0}-{1} references a node outside 0..{2}")]
    NodeOutOfRange(usize, usize, usize),
}

/// Immutable simple undirected graph on nodes `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_count += 1;
        }
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self {
            adjacency,
            edge_count,
        })
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Maximum degree; 0 for the empty graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Returns `Some(d)` if every node has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first().map(Vec::len)?;
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    /// Disjoint union of `self` and `other`; `other`'s nodes are shifted by `self.node_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.node_count();
        let mut adjacency = self.adjacency.clone();
        adjacency.extend(
            other
                .adjacency
                .iter()
                .map(|l| l.iter().map(|v| v + shift).collect()),
        );
        Graph {
            adjacency,
            edge_count: self.edge_count + other.edge_count,
        }
    }

    pub(crate) fn check_universe(&self, set: &NodeSet) -> Result<(), GraphError> {
        if set.universe_size() != self.node_count() {
            return Err(GraphError::UniverseMismatch {
                expected: self.node_count(),
                got: set.universe_size(),
            });
        }
        Ok(())
    }

    /// Number of edges with both endpoints in `alive`.
    pub fn induced_edge_count(&self, alive: &NodeSet) -> usize {
        alive
            .iter()
            .map(|u| {
                self.neighbors(u)
                    .iter()
                    .filter(|&&v| v > u && alive.contains(v))
                    .count()
            })
            .sum()
    }

    /// Degree of `v` inside the subgraph induced by `alive`.
    pub fn induced_degree(&self, v: usize, alive: &NodeSet) -> usize {
        self.neighbors(v)
            .iter()
            .filter(|&&u| alive.contains(u))
            .count()
    }
}

/// A subset of the nodes `0..universe_size`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSet {
    flags: Vec<bool>,
    len: usize,
}

impl NodeSet {
    pub fn empty(universe_size: usize) -> Self {
        Self {
            flags: vec![false; universe_size],
            len: 0,
        }
    }

    pub fn full(universe_size: usize) -> Self {
        Self {
            flags: vec![true; universe_size],
            len: universe_size,
        }
    }

    /// Panics if a member is outside the universe.
    pub fn from_members<I: IntoIterator<Item = usize>>(universe_size: usize, members: I) -> Self {
        let mut set = Self::empty(universe_size);
        for v in members {
            set.insert(v);
        }
        set
    }

    pub fn universe_size(&self) -> usize {
        self.flags.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.flags.get(v).copied().unwrap_or(false)
    }

    /// Returns whether `v` was newly inserted.
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.flags.len(),
            "node {v} outside universe of size {}",
            self.flags.len()
        );
        let fresh = !self.flags[v];
        self.flags[v] = true;
        self.len += fresh as usize;
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.contains(v);
        if present {
            self.flags[v] = false;
            self.len -= 1;
        }
        present
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(v, &member)| member.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        for v in other.iter() {
            self.insert(v);
        }
    }

    pub fn is_disjoint(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl std::fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// True iff no edge of `g` has both endpoints in `set`.
pub fn verify_independent(g: &Graph, set: &NodeSet) -> Result<bool, GraphError> {
    g.check_universe(set)?;
    Ok(set
        .iter()
        .all(|u| g.neighbors(u).iter().all(|&v| !set.contains(v))))
}

/// True iff `set` is independent and every node outside it has a neighbour inside it.
pub fn verify_maximal_independent(g: &Graph, set: &NodeSet) -> Result<bool, GraphError> {
    if !verify_independent(g, set)? {
        return Ok(false);
    }
    Ok((0..g.node_count())
        .filter(|&v| !set.contains(v))
        .all(|v| g.neighbors(v).iter().any(|&u| set.contains(u))))
}

/// Connected components of the subgraph induced by `alive`, ordered by smallest member.
pub fn components(g: &Graph, alive: &NodeSet) -> Result<Vec<NodeSet>, GraphError> {
    g.check_universe(alive)?;
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for root in alive.iter() {
        if seen[root] {
            continue;
        }
        let mut comp = NodeSet::empty(n);
        seen[root] = true;
        stack.push(root);
        while let Some(u) = stack.pop() {
            comp.insert(u);
            for &v in g.neighbors(u) {
                if alive.contains(v) && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        out.push(comp);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn from_edges_rejects_non_simple_input() {
        assert_eq!(
            Graph::from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert_eq!(Graph::from_edges(3, [(2, 2)]), Err(GraphError::SelfLoop(2)));
        assert!(matches!(
            Graph::from_edges(3, [(0, 3)]),
            Err(GraphError::NodeOutOfRange(0, 3, 3))
        ));
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::from_edges(4, [(3, 0), (2, 0), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        for (u, v) in g.edges() {
            assert!(g.has_edge(v, u));
        }
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn independence_examples() {
        let k2 = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert!(verify_independent(&k2, &NodeSet::from_members(2, [0])).unwrap());
        assert!(!verify_independent(&k2, &NodeSet::from_members(2, [0, 1])).unwrap());
        assert!(verify_maximal_independent(&k2, &NodeSet::from_members(2, [0])).unwrap());

        let c7 = cycle(7);
        let s = NodeSet::from_members(7, [0, 2, 4]);
        assert!(verify_independent(&c7, &s).unwrap());
        // 1, 3 and 5 are covered by 0/2, 2/4 and 4; 6 is covered by 0.
        assert!(verify_maximal_independent(&c7, &s).unwrap());

        let p3 = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(!verify_maximal_independent(&p3, &NodeSet::empty(3)).unwrap());
    }

    #[test]
    fn universe_mismatch_is_reported() {
        let g = cycle(5);
        assert_eq!(
            verify_independent(&g, &NodeSet::empty(4)),
            Err(GraphError::UniverseMismatch {
                expected: 5,
                got: 4
            })
        );
        assert!(verify_maximal_independent(&g, &NodeSet::empty(6)).is_err());
    }

    #[test]
    fn components_examples() {
        let c7 = cycle(7);
        let all = components(&c7, &NodeSet::full(7)).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].len(), 7);

        let parts = components(&c7, &NodeSet::from_members(7, [0, 1, 3])).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_vec(), vec![0, 1]);
        assert_eq!(parts[1].to_vec(), vec![3]);

        let two = c7.disjoint_union(&c7);
        let parts = components(&two, &NodeSet::full(14)).unwrap();
        assert_eq!(parts.iter().map(NodeSet::len).collect::<Vec<_>>(), [7, 7]);
    }

    #[test]
    fn node_set_bookkeeping() {
        let mut s = NodeSet::empty(5);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        assert_eq!(s.len(), 1);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert!(s.is_empty());
        assert!(!s.contains(17));
    }
}
