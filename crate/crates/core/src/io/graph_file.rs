use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use super::IoError;
use crate::graph::Graph;

/// `n m` on the first line, then one `u v` line per edge. Blank lines and
/// lines starting with `#` are ignored.
pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").expect("writing to a String");
    }
    out
}

pub fn write_graph(g: &Graph, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, render_graph(g)).map_err(IoError::io(path))
}

pub fn read_graph(path: &Path) -> Result<Graph, IoError> {
    let text = std::fs::read_to_string(path).map_err(IoError::io(path))?;
    parse_graph(&text)
}

fn two_numbers(line: usize, s: &str) -> Result<(usize, usize), IoError> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize, IoError> {
        let tok = it
            .next()
            .ok_or_else(|| IoError::parse(line, "expected two integers"))?;
        tok.parse()
            .map_err(|_| IoError::parse(line, format!("`{tok}` is not a non-negative integer")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(IoError::parse(line, "trailing tokens"));
    }
    Ok(pair)
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| IoError::parse(1, "missing `n m` header"))?;
    let (n, m) = two_numbers(header_line, header)?;
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    let mut last_line = header_line;
    for (line, l) in lines {
        last_line = line;
        let (u, v) = two_numbers(line, l)?;
        if u >= n || v >= n {
            return Err(IoError::parse(
                line,
                format!("edge {u}-{v} references a node outside 0..{n}"),
            ));
        }
        if u == v {
            return Err(IoError::parse(line, format!("self-loop at node {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(IoError::parse(line, format!("duplicate edge {u}-{v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(IoError::parse(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Ok(Graph::from_edges(n, edges).expect("edges validated above"))
}
