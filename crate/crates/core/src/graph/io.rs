//! Edge-list text format: a header line `n m`, then `m` lines `u v` with
//! 0-based ids and `u < v`.

use std::fmt::Write as _;

use super::{Graph, GraphError, NodeId};

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the edge-list format. Disconnected graphs are rejected.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let parse_pair = |line: usize, l: &str| -> Result<(usize, usize), GraphError> {
        let err = |msg: &str| GraphError::Parse { line, msg: msg.to_string() };
        let mut it = l.split_whitespace();
        let a = it.next().ok_or_else(|| err("missing field"))?;
        let b = it.next().ok_or_else(|| err("missing field"))?;
        if it.next().is_some() {
            return Err(err("trailing fields"));
        }
        Ok((
            a.parse().map_err(|_| err("not an integer"))?,
            b.parse().map_err(|_| err("not an integer"))?,
        ))
    };
    let (line, header) = lines.next().ok_or(GraphError::Parse { line: 1, msg: "empty input".into() })?;
    let (n, m) = parse_pair(line, header)?;
    let mut edges: Vec<(NodeId, NodeId)> = Vec::with_capacity(m);
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        if u >= v {
            return Err(GraphError::Parse { line, msg: format!("expected u < v, got {u} {v}") });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    let g = Graph::from_edges(n, &edges)?;
    g.require_connected()?;
    Ok(g)
}
