use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError};

/// Swap attempts allowed before a generator reports `InfeasibleParams`.
pub const DEFAULT_SWAP_BUDGET: usize = 1_000_000;

/// Random `d`-regular simple graph on `n` nodes with girth at least `min_girth`.
///
/// Stubs are paired uniformly (configuration model). Every edge that is a
/// loop, a parallel edge, or lies on a cycle shorter than `min_girth` is
/// then repaired by degree-preserving double-edge swaps with a uniformly
/// chosen partner edge. A swap is kept only if neither new edge closes a
/// short cycle. If that stalls, an annealed search over arbitrary swaps
/// takes over, minimizing the number of bad edges.
pub fn generate_regular_girth(
    n: usize,
    d: usize,
    min_girth: usize,
    seed: u64,
) -> Result<Graph, GraphError> {
    generate_regular_girth_with_budget(n, d, min_girth, seed, DEFAULT_SWAP_BUDGET)
}

pub fn generate_regular_girth_with_budget(
    n: usize,
    d: usize,
    min_girth: usize,
    seed: u64,
    budget: usize,
) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::BadArity { n, d });
    }
    if d < 2 {
        return Err(GraphError::InfeasibleParams(format!(
            "degree must be at least 2 (got {d})"
        )));
    }
    if min_girth < 3 {
        return Err(GraphError::InfeasibleParams(format!(
            "min_girth must be at least 3 (got {min_girth})"
        )));
    }
    if n <= d {
        return Err(GraphError::InfeasibleParams(format!(
            "a simple {d}-regular graph needs more than {d} nodes (got {n})"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    stubs.shuffle(&mut rng);
    let mut multi = MultiGraph::new(n);
    for pair in stubs.chunks_exact(2) {
        multi.add(pair[0], pair[1]);
    }

    // Longest path length (in edges) that still closes a forbidden cycle.
    let short = min_girth - 2;
    let exhausted = || {
        GraphError::InfeasibleParams(format!(
            "girth repair for n={n}, d={d}, min_girth={min_girth} \
             exhausted {budget} swap attempts"
        ))
    };
    // Monotone repair can stall when no improving swap exists (tight
    // parameters); past this many attempts switch to the annealed search.
    let stall = (50 * n * d).max(20_000).min(budget);
    let mut attempts = 0usize;
    'repair: loop {
        let bad: Vec<usize> = (0..multi.edges.len())
            .filter(|&i| multi.is_bad(i, short))
            .collect();
        if bad.is_empty() {
            break;
        }
        for idx in bad {
            while multi.is_bad(idx, short) {
                attempts += 1;
                if attempts > stall {
                    break 'repair;
                }
                let m = multi.edges.len();
                let mut partner = rng.gen_range(0..m - 1);
                if partner >= idx {
                    partner += 1;
                }
                let flip = rng.gen_bool(0.5);
                multi.try_swap(idx, partner, flip, short);
            }
        }
    }
    if attempts > stall && !multi.anneal(short, &mut rng, budget - stall) {
        return Err(exhausted());
    }

    let graph = Graph::from_edges(n, multi.edges.iter().copied())?;
    assert_eq!(
        graph.regular_degree(),
        Some(d),
        "generator broke regularity"
    );
    Ok(graph)
}

/// Random `d`-regular bipartite graph with `n_per_side` nodes per side.
///
/// Nodes `0..n_per_side` form the left side. The edge multiset is a union
/// of `d` uniformly random perfect matchings; parallel edges are repaired by
/// swaps that keep both sides regular.
pub fn generate_bipartite_regular(
    n_per_side: usize,
    d: usize,
    seed: u64,
) -> Result<Graph, GraphError> {
    if d > n_per_side {
        return Err(GraphError::InfeasibleParams(format!(
            "degree {d} exceeds side size {n_per_side}"
        )));
    }
    let n = 2 * n_per_side;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut multi = MultiGraph::new(n);
    let mut perm: Vec<usize> = (0..n_per_side).collect();
    for _ in 0..d {
        perm.shuffle(&mut rng);
        for (left, &right) in perm.iter().enumerate() {
            multi.add(left, n_per_side + right);
        }
    }

    let mut attempts = 0usize;
    loop {
        let dup: Vec<usize> = (0..multi.edges.len())
            .filter(|&i| multi.is_parallel(i))
            .collect();
        if dup.is_empty() {
            break;
        }
        for idx in dup {
            while multi.is_parallel(idx) {
                attempts += 1;
                if attempts > DEFAULT_SWAP_BUDGET {
                    return Err(GraphError::InfeasibleParams(format!(
                        "bipartite repair for n_per_side={n_per_side}, d={d} \
                         exhausted {DEFAULT_SWAP_BUDGET} swap attempts"
                    )));
                }
                let m = multi.edges.len();
                let mut partner = rng.gen_range(0..m - 1);
                if partner >= idx {
                    partner += 1;
                }
                // Edges are stored (left, right); flipping pairs left with right.
                multi.try_swap(idx, partner, true, 1);
            }
        }
    }

    let graph = Graph::from_edges(n, multi.edges.iter().copied())?;
    if n > 0 {
        assert_eq!(
            graph.regular_degree(),
            Some(d),
            "generator broke regularity"
        );
    }
    Ok(graph)
}

/// Uniformly random labelled tree on `n >= 1` nodes, decoded from a random Prüfer sequence.
pub fn generate_tree(n: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::InfeasibleParams(
            "a tree needs at least one node".into(),
        ));
    }
    if n <= 2 {
        return Graph::from_edges(n, (n == 2).then_some((0, 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut remaining = vec![1usize; n];
    for &c in &code {
        remaining[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| remaining[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().expect("Prüfer decoding always has a leaf");
        edges.push((leaf, c));
        remaining[c] -= 1;
        if remaining[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(u) = leaves.pop().expect("two leaves remain");
    let Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u, v));
    Graph::from_edges(n, edges)
}

/// Edge multiset used while repairing generator output.
struct MultiGraph {
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    // BFS scratch with generation stamps so searches need no clearing.
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<(usize, usize)>,
}

impl MultiGraph {
    fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            stamp: vec![0; n],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    fn add(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
        self.link(u, v);
    }

    fn link(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn unlink(&mut self, u: usize, v: usize) {
        let pos = self.adj[u]
            .iter()
            .position(|&x| x == v)
            .expect("edge present");
        self.adj[u].swap_remove(pos);
        let pos = self.adj[v]
            .iter()
            .position(|&x| x == u)
            .expect("edge present");
        self.adj[v].swap_remove(pos);
    }

    fn multiplicity(&self, u: usize, v: usize) -> usize {
        self.adj[u].iter().filter(|&&x| x == v).count()
    }

    fn is_parallel(&self, idx: usize) -> bool {
        let (u, v) = self.edges[idx];
        u == v || self.multiplicity(u, v) > 1
    }

    /// Loop, parallel edge, or an edge whose endpoints are joined by another
    /// path of at most `short` edges.
    fn is_bad(&mut self, idx: usize, short: usize) -> bool {
        if self.is_parallel(idx) {
            return true;
        }
        let (u, v) = self.edges[idx];
        self.within(u, v, short, true)
    }

    /// BFS from `src`: is `dst` reachable in at most `limit` steps? When
    /// `skip_direct`, the edge `src`-`dst` itself is not used.
    fn within(&mut self, src: usize, dst: usize, limit: usize, skip_direct: bool) -> bool {
        if src == dst {
            return true;
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        self.queue.clear();
        self.stamp[src] = gen;
        self.queue.push_back((src, 0));
        while let Some((x, dist)) = self.queue.pop_front() {
            if dist == limit {
                continue;
            }
            for i in 0..self.adj[x].len() {
                let y = self.adj[x][i];
                if skip_direct && x == src && y == dst {
                    continue;
                }
                if y == dst {
                    return true;
                }
                if self.stamp[y] != gen {
                    self.stamp[y] = gen;
                    self.queue.push_back((y, dist + 1));
                }
            }
        }
        false
    }

    /// Annealed repair: swap a uniformly chosen bad edge with a random
    /// partner, keep the swap if the bad-edge count does not grow and with
    /// probability `exp(-increase / 0.3)` otherwise. Returns whether all bad
    /// edges were removed within `budget` swaps.
    fn anneal(&mut self, short: usize, rng: &mut ChaCha8Rng, budget: usize) -> bool {
        const TEMPERATURE: f64 = 0.3;
        let m = self.edges.len();
        let mut bad: Vec<bool> = (0..m).map(|i| self.is_bad(i, short)).collect();
        let mut bad_list: Vec<usize> = (0..m).filter(|&i| bad[i]).collect();
        for _ in 0..budget {
            if bad_list.is_empty() {
                return true;
            }
            let i = bad_list[rng.gen_range(0..bad_list.len())];
            let mut j = rng.gen_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            let (a, b) = self.edges[i];
            let (c, d) = if rng.gen_bool(0.5) {
                (self.edges[j].1, self.edges[j].0)
            } else {
                self.edges[j]
            };
            if a == c || b == d {
                continue;
            }
            let mut touched = self.ball(&[a, b, c, d], short);
            self.unlink(a, b);
            self.unlink(c, d);
            self.link(a, c);
            self.link(b, d);
            let (old_i, old_j) = (self.edges[i], self.edges[j]);
            self.edges[i] = (a, c);
            self.edges[j] = (b, d);
            for (x, hit) in self.ball(&[a, b, c, d], short).into_iter().enumerate() {
                touched[x] |= hit;
            }
            let affected: Vec<usize> = (0..m)
                .filter(|&e| touched[self.edges[e].0] || touched[self.edges[e].1])
                .collect();
            let now: Vec<bool> = affected.iter().map(|&e| self.is_bad(e, short)).collect();
            let before = affected.iter().filter(|&&e| bad[e]).count();
            let after = now.iter().filter(|&&x| x).count();
            let accept = after <= before
                || rng.gen::<f64>() < (-((after - before) as f64) / TEMPERATURE).exp();
            if accept {
                for (&e, &x) in affected.iter().zip(&now) {
                    bad[e] = x;
                }
                bad_list = (0..m).filter(|&e| bad[e]).collect();
            } else {
                self.unlink(a, c);
                self.unlink(b, d);
                self.link(a, b);
                self.link(c, d);
                self.edges[i] = old_i;
                self.edges[j] = old_j;
            }
        }
        bad_list.is_empty()
    }

    /// Nodes within `radius` steps of any of `sources`.
    fn ball(&mut self, sources: &[usize], radius: usize) -> Vec<bool> {
        let mut inside = vec![false; self.adj.len()];
        self.queue.clear();
        for &s in sources {
            if !inside[s] {
                inside[s] = true;
                self.queue.push_back((s, 0));
            }
        }
        while let Some((x, dist)) = self.queue.pop_front() {
            if dist == radius {
                continue;
            }
            for i in 0..self.adj[x].len() {
                let y = self.adj[x][i];
                if !inside[y] {
                    inside[y] = true;
                    self.queue.push_back((y, dist + 1));
                }
            }
        }
        inside
    }

    /// Replaces edges `a-b` and `c-d` by `a-c` and `b-d` (or `a-d`, `b-c`
    /// when `flip`), keeping the swap only if the new edges are simple and
    /// close no cycle of at most `short + 1` edges.
    fn try_swap(&mut self, i: usize, j: usize, flip: bool, short: usize) -> bool {
        let (a, b) = self.edges[i];
        let (c, d) = if flip {
            (self.edges[j].1, self.edges[j].0)
        } else {
            self.edges[j]
        };
        if a == c || b == d {
            return false;
        }
        self.unlink(a, b);
        self.unlink(c, d);
        let ok = if self.within(a, c, short, false) {
            false
        } else {
            self.link(a, c);
            if self.within(b, d, short, false) {
                self.unlink(a, c);
                false
            } else {
                self.link(b, d);
                true
            }
        };
        if ok {
            self.edges[i] = (a.min(c), a.max(c));
            self.edges[j] = (b.min(d), b.max(d));
        } else {
            self.link(a, b);
            self.link(c, d);
        }
        ok
    }
}
