use super::{Graph, GraphError};

/// Names accepted by [`load_named`]; `cycle`, `path` and `complete` take a size argument.
pub const NAMED_FIXTURES: &[&str] = &[
    "cycle(m)",
    "path(m)",
    "complete(m)",
    "petersen",
    "heawood",
    "mcgee",
    "tutte_coxeter",
];

#[rustfmt::skip]
const PETERSEN_EDGES: &[(usize, usize)] = &[
    (0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4), (3, 8), (4, 9), (5, 7),
    (5, 8), (6, 8), (6, 9), (7, 9),
];

// (3,6)-cage.
#[rustfmt::skip]
const HEAWOOD_EDGES: &[(usize, usize)] = &[
    (0, 1), (0, 5), (0, 13), (1, 2), (1, 10), (2, 3), (2, 7), (3, 4), (3, 12), (4, 5), (4, 9),
    (5, 6), (6, 7), (6, 11), (7, 8), (8, 9), (8, 13), (9, 10), (10, 11), (11, 12), (12, 13),
];

// (3,7)-cage.
#[rustfmt::skip]
const MCGEE_EDGES: &[(usize, usize)] = &[
    (0, 1), (0, 12), (0, 23), (1, 2), (1, 8), (2, 3), (2, 19), (3, 4), (3, 15), (4, 5), (4, 11),
    (5, 6), (5, 22), (6, 7), (6, 18), (7, 8), (7, 14), (8, 9), (9, 10), (9, 21), (10, 11),
    (10, 17), (11, 12), (12, 13), (13, 14), (13, 20), (14, 15), (15, 16), (16, 17), (16, 23),
    (17, 18), (18, 19), (19, 20), (20, 21), (21, 22), (22, 23),
];

// (3,8)-cage.
#[rustfmt::skip]
const TUTTE_COXETER_EDGES: &[(usize, usize)] = &[
    (0, 1), (0, 17), (0, 29), (1, 2), (1, 22), (2, 3), (2, 9), (3, 4), (3, 26), (4, 5), (4, 13),
    (5, 6), (5, 18), (6, 7), (6, 23), (7, 8), (7, 28), (8, 9), (8, 15), (9, 10), (10, 11),
    (10, 19), (11, 12), (11, 24), (12, 13), (12, 29), (13, 14), (14, 15), (14, 21), (15, 16),
    (16, 17), (16, 25), (17, 18), (18, 19), (19, 20), (20, 21), (20, 27), (21, 22), (22, 23),
    (23, 24), (24, 25), (25, 26), (26, 27), (27, 28), (28, 29),
];

/// Loads a fixture by name, e.g. `"mcgee"` or `"cycle(7)"`.
pub fn load_named(name: &str) -> Result<Graph, GraphError> {
    let unknown = || GraphError::UnknownName(name.to_string());
    let trimmed = name.trim();
    let fixed = |n: usize, edges: &[(usize, usize)]| Graph::from_edges(n, edges.iter().copied());
    match trimmed {
        "petersen" => return fixed(10, PETERSEN_EDGES),
        "heawood" => return fixed(14, HEAWOOD_EDGES),
        "mcgee" => return fixed(24, MCGEE_EDGES),
        "tutte_coxeter" => return fixed(30, TUTTE_COXETER_EDGES),
        _ => {}
    }
    let (family, rest) = trimmed.split_once('(').ok_or_else(unknown)?;
    let m: usize = rest
        .strip_suffix(')')
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(unknown)?;
    match family {
        "cycle" if m >= 3 => Graph::from_edges(m, (0..m).map(|i| (i, (i + 1) % m))),
        "path" if m >= 1 => Graph::from_edges(m, (1..m).map(|i| (i - 1, i))),
        "complete" if m >= 1 => {
            Graph::from_edges(m, (0..m).flat_map(|u| (u + 1..m).map(move |v| (u, v))))
        }
        _ => Err(unknown()),
    }
}
