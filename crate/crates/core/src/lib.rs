//! Simulator and algorithm library for maximal independent set (MIS)
//! computation in the LOCAL model of distributed computing.
//!
//! The crate is split into five layers:
//!
//! * [`graph`]: immutable simple graphs, generators for the instance
//!   families (high-girth regular, bipartite regular, trees, named cages),
//!   and structural checks (girth, components, independence, maximality).
//! * [`sim`]: a round-synchronous engine. Algorithms read only messages
//!   published by alive direct neighbours; randomness comes from
//!   counter-based per-(node, iteration) substreams.
//! * [`mis`]: the algorithm catalog. Luby and desire-probability baselines,
//!   the two-round interval-candidate procedure for regular triangle-free
//!   graphs, the weighted inclusion procedure, the pre-shattering driver
//!   and a deterministic completion stage.
//! * [`analysis`]: Monte-Carlo estimators with Wilson intervals, bound
//!   checkers, shattering measurements and brute-force oracles.
//! * [`io`]: graph files, profile files and append-only result stores.

pub mod analysis;
pub mod graph;
pub mod io;
pub mod mis;
pub mod sim;

pub use graph::{Graph, GraphError, NodeSet};
pub use mis::{Algorithm, MisError, ParamProfile, ProfileMode};
pub use sim::{RngStream, RunTrace, SimError};
