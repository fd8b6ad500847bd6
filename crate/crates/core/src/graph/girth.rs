use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Length of the shortest cycle. `Finite(_)` orders below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Girth {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthReport {
    pub girth: Girth,
    /// A shortest cycle, listed in traversal order, when the girth is finite.
    pub witness_cycle: Option<Vec<usize>>,
}

/// Exact girth via one BFS per root. From root `s`, a non-tree edge `x-y`
/// closes a closed walk of length `dist[x] + dist[y] + 1`; the minimum over
/// all roots is the girth, attained at a root lying on a shortest cycle.
pub fn girth(g: &Graph) -> GirthReport {
    let n = g.node_count();
    let mut best: Option<(usize, usize, usize, usize)> = None; // (len, root, x, y)
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    let mut best_parents = Vec::new();

    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = root;
        queue.clear();
        queue.push_back(root);
        let mut found: Option<(usize, usize, usize)> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            // Nothing shorter than the current best can be found deeper.
            if let Some((len, ..)) = best {
                if 2 * dist[x] + 1 >= len {
                    break;
                }
            }
            for &y in g.neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                } else if parent[x] != y {
                    let len = dist[x] + dist[y] + 1;
                    found = Some((len, x, y));
                    break 'bfs;
                }
            }
        }
        if let Some((len, x, y)) = found {
            if best.is_none_or(|(b, ..)| len < b) {
                best = Some((len, root, x, y));
                best_parents.clone_from(&parent);
            }
        }
    }

    match best {
        None => GirthReport {
            girth: Girth::Infinite,
            witness_cycle: None,
        },
        Some((_, root, x, y)) => {
            let path = |mut v: usize| {
                let mut p = vec![v];
                while v != root {
                    v = best_parents[v];
                    p.push(v);
                }
                p.reverse();
                p
            };
            let px = path(x);
            let py = path(y);
            // Strip a shared prefix beyond the root so the cycle is simple.
            let common = px.iter().zip(&py).take_while(|(a, b)| a == b).count();
            let mut cycle: Vec<usize> = px[common - 1..].to_vec();
            cycle.extend(py[common..].iter().rev());
            GirthReport {
                girth: Girth::Finite(cycle.len()),
                witness_cycle: Some(cycle),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_named;

    fn assert_valid_witness(g: &Graph, report: &GirthReport) {
        let Girth::Finite(len) = report.girth else {
            panic!("expected a finite girth");
        };
        let cycle = report.witness_cycle.as_ref().unwrap();
        assert_eq!(cycle.len(), len);
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), len, "witness repeats a node");
        for i in 0..len {
            assert!(g.has_edge(cycle[i], cycle[(i + 1) % len]));
        }
    }

    #[test]
    fn cycle_witness_is_the_cycle() {
        let c7 = load_named("cycle(7)").unwrap();
        let r = girth(&c7);
        assert_eq!(r.girth, Girth::Finite(7));
        assert_valid_witness(&c7, &r);
    }

    #[test]
    fn forests_are_infinite() {
        let p = load_named("path(6)").unwrap();
        assert_eq!(girth(&p).girth, Girth::Infinite);
        assert_eq!(girth(&Graph::empty(0)).girth, Girth::Infinite);
    }

    #[test]
    fn named_cages() {
        for (name, expected) in [
            ("petersen", 5),
            ("heawood", 6),
            ("mcgee", 7),
            ("tutte_coxeter", 8),
            ("complete(4)", 3),
        ] {
            let g = load_named(name).unwrap();
            let r = girth(&g);
            assert_eq!(r.girth, Girth::Finite(expected), "{name}");
            assert_valid_witness(&g, &r);
        }
    }

    #[test]
    fn ordering_puts_infinite_last() {
        assert!(Girth::Finite(1000) < Girth::Infinite);
        assert!(Girth::Finite(6) < Girth::Finite(7));
    }
}
