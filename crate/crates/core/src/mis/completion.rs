use super::MisError;
use crate::graph::{Graph, NodeSet};
use crate::sim::{Network, RunTrace, SimError};

/// Deterministic completion on the subgraph induced by `residual`: in each
/// round an undecided node joins iff its id is smaller than every undecided
/// neighbour's id. The smallest undecided id always joins, so at most
/// `|residual|` rounds are needed; exceeding `cap` means the engine is broken.
///
/// Adds the completion rounds to `trace` and returns the joined nodes.
pub fn completion(
    g: &Graph,
    residual: &NodeSet,
    cap: u64,
    trace: &mut RunTrace,
) -> Result<NodeSet, MisError> {
    g.check_universe(residual)?;
    let n = g.node_count();
    let mut net = Network::new(g, residual.clone());
    let mut mis = NodeSet::empty(n);
    let ids: Vec<usize> = (0..n).collect();
    let mut iterations = 0u64;
    while !net.alive().is_empty() {
        iterations += 1;
        if iterations > cap {
            return Err(SimError::IterationCapExceeded { cap }.into());
        }
        let joins = net.exchange(&ids, |view| {
            let me = *view.own();
            Ok(view.neighbor_messages().all(|&u| me < u))
        })?;
        let joined = NodeSet::from_members(
            n,
            joins
                .iter()
                .enumerate()
                .filter_map(|(v, j)| (*j == Some(true)).then_some(v)),
        );
        net.retire(&joined)?;
        mis.union_with(&joined);
    }
    trace.completion_rounds += net.rounds();
    Ok(mis)
}
