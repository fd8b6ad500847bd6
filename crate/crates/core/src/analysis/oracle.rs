use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::graph::{Graph, NodeSet};

/// Largest graph the exhaustive enumerator accepts.
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisCensus {
    pub min_size: usize,
    pub max_size: usize,
    pub count: usize,
}

/// Every maximal independent set of `g`, as bitmasks over node ids.
pub fn maximal_independent_masks(g: &Graph) -> Result<Vec<u32>, AnalysisError> {
    let n = g.node_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(AnalysisError::TooLarge {
            nodes: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let mut out = Vec::new();
    extend(&adj, 0, 0, 0, &mut out);
    Ok(out)
}

/// Branches on node `v`: include it when no chosen neighbour blocks it, or
/// leave it out. `blocked` marks nodes with a chosen neighbour.
fn extend(adj: &[u32], v: usize, chosen: u32, blocked: u32, out: &mut Vec<u32>) {
    let n = adj.len();
    if v == n {
        let covered = chosen | blocked;
        if covered.count_ones() as usize == n {
            out.push(chosen);
        }
        return;
    }
    // A left-out earlier node with no chosen neighbour can still be covered
    // only by a later neighbour; prune when none exists.
    for (u, &row) in adj.iter().enumerate().take(v) {
        if (chosen | blocked) & (1 << u) == 0 && row >> v == 0 {
            return;
        }
    }
    if blocked & (1 << v) == 0 {
        extend(adj, v + 1, chosen | 1 << v, blocked | adj[v], out);
    }
    extend(adj, v + 1, chosen, blocked, out);
}

/// Every maximal independent set of `g`.
pub fn maximal_independent_sets(g: &Graph) -> Result<Vec<NodeSet>, AnalysisError> {
    let n = g.node_count();
    Ok(maximal_independent_masks(g)?
        .into_iter()
        .map(|mask| NodeSet::from_members(n, (0..n).filter(|&v| mask >> v & 1 == 1)))
        .collect())
}

/// Smallest and largest maximal independent set sizes and their number.
pub fn brute_force_mis_sizes(g: &Graph) -> Result<MisCensus, AnalysisError> {
    let masks = maximal_independent_masks(g)?;
    let sizes = masks.iter().map(|m| m.count_ones() as usize);
    Ok(MisCensus {
        min_size: sizes.clone().min().unwrap_or(0),
        max_size: sizes.max().unwrap_or(0),
        count: masks.len(),
    })
}

/// Outcome of the numeric check of `exp(-x - x^2/delta) <= 1 - x <= exp(-x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub checked: usize,
    /// First `(delta, x)` where either side failed.
    pub violation: Option<(f64, f64)>,
}

impl ExponentCheck {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Relative slack allowed for rounding in `exp` and `1 - x`.
const EXPONENT_SLACK: f64 = 4.0 * f64::EPSILON;

fn exponent_bounds_hold(delta: f64, x: f64) -> bool {
    let middle = 1.0 - x;
    let lower = (-x - x * x / delta).exp();
    let upper = (-x).exp();
    lower <= middle * (1.0 + EXPONENT_SLACK) && middle <= upper * (1.0 + EXPONENT_SLACK)
}

/// Evaluates both inequalities for `delta` in (0, 1) and `x` in (0, 1 - delta)
/// on a `grid x grid` lattice of interior points plus `samples` uniform
/// random points.
pub fn check_exponent_bounds(grid: usize, samples: usize, seed: u64) -> ExponentCheck {
    use rand::{Rng, SeedableRng};
    let mut checked = 0;
    let mut points = Vec::with_capacity(grid * grid);
    for i in 1..=grid {
        let delta = i as f64 / (grid + 1) as f64;
        for j in 1..=grid {
            let x = (1.0 - delta) * j as f64 / (grid + 1) as f64;
            points.push((delta, x));
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let delta: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
        let x: f64 = rng.gen_range(0.0..1.0) * (1.0 - delta);
        if x > 0.0 {
            points.push((delta, x));
        }
    }
    for (delta, x) in points {
        checked += 1;
        if !exponent_bounds_hold(delta, x) {
            return ExponentCheck {
                checked,
                violation: Some((delta, x)),
            };
        }
    }
    ExponentCheck {
        checked,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{load_named, verify_maximal_independent};

    /// Plain 2^n scan, independent of the pruned search.
    fn scan(g: &Graph) -> Vec<u32> {
        let n = g.node_count();
        (0u32..1 << n)
            .filter(|&mask| {
                let s = NodeSet::from_members(n, (0..n).filter(|&v| mask >> v & 1 == 1));
                verify_maximal_independent(g, &s).unwrap()
            })
            .collect()
    }

    #[test]
    fn small_censuses() {
        let k2 = load_named("complete(2)").unwrap();
        assert_eq!(
            brute_force_mis_sizes(&k2).unwrap(),
            MisCensus {
                min_size: 1,
                max_size: 1,
                count: 2
            }
        );
        let p3 = load_named("path(3)").unwrap();
        assert_eq!(
            brute_force_mis_sizes(&p3).unwrap(),
            MisCensus {
                min_size: 1,
                max_size: 2,
                count: 2
            }
        );
        let c7 = load_named("cycle(7)").unwrap();
        let census = brute_force_mis_sizes(&c7).unwrap();
        assert_eq!((census.min_size, census.max_size, census.count), (3, 3, 7));
    }

    #[test]
    fn pruned_search_matches_scan() {
        for name in ["cycle(7)", "petersen", "path(9)", "complete(5)", "heawood"] {
            let g = load_named(name).unwrap();
            let mut fast = maximal_independent_masks(&g).unwrap();
            fast.sort();
            assert_eq!(fast, scan(&g), "{name}");
        }
    }

    #[test]
    fn every_enumerated_set_is_maximal() {
        let g = load_named("petersen").unwrap();
        for s in maximal_independent_sets(&g).unwrap() {
            assert!(verify_maximal_independent(&g, &s).unwrap());
        }
    }

    #[test]
    fn too_large() {
        let g = load_named("tutte_coxeter").unwrap();
        assert!(matches!(
            brute_force_mis_sizes(&g),
            Err(AnalysisError::TooLarge { .. })
        ));
        assert!(brute_force_mis_sizes(&load_named("mcgee").unwrap()).is_ok());
    }

    #[test]
    fn empty_graph_has_one_empty_mis() {
        let g = Graph::empty(0);
        assert_eq!(
            brute_force_mis_sizes(&g).unwrap(),
            MisCensus {
                min_size: 0,
                max_size: 0,
                count: 1
            }
        );
    }

    #[test]
    fn exponent_examples() {
        // delta = 0.5, x = 0.4: exp(-0.72) ~ 0.4868 <= 0.6 <= exp(-0.4) ~ 0.6703.
        assert!(exponent_bounds_hold(0.5, 0.4));
        assert!(exponent_bounds_hold(0.5, 1e-12));
        assert!(check_exponent_bounds(50, 1000, 1).holds());
        // Outside the domain the lower bound breaks.
        assert!(!exponent_bounds_hold(0.9, 0.9));
    }
}
