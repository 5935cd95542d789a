//! Undirected simple graphs with dense ids, plus the brute-force distance
//! oracles every algorithm is checked against.

mod generate;
mod io;

pub use generate::{generate, Family};
pub use io::{parse_edge_list, write_edge_list};

use std::collections::{BTreeMap, VecDeque};

use crate::par::{self, Exec};

pub type NodeId = usize;
pub type Dist = u32;

const UNREACHED: Dist = Dist::MAX;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: NodeId, n: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(NodeId),
    #[error("graph is disconnected: node {unreachable} unreachable from {from}")]
    Disconnected { from: NodeId, unreachable: NodeId },
    #[error("graph has no nodes")]
    Empty,
    #[error("invalid generator parameters: {0}")]
    InvalidParameters(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Compressed adjacency: `targets[offsets[u]..offsets[u + 1]]` lists the
/// neighbors of `u` in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::NodeOutOfRange { node: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut list in adj {
            list.sort_unstable();
            list.dedup();
            targets.extend(list);
            offsets.push(targets.len());
        }
        Ok(Graph { offsets, targets })
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Position of the directed edge `u -> k-th neighbor` in the flat adjacency.
    pub fn edge_index(&self, u: NodeId, k: usize) -> usize {
        self.offsets[u] + k
    }

    pub fn port_of(&self, u: NodeId, v: NodeId) -> Option<usize> {
        self.neighbors(u).binary_search(&v).ok()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        u < self.n() && self.port_of(u, v).is_some()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn directed_edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && raw_bfs(self, 0).iter().all(|&d| d != UNREACHED)
    }

    pub fn require_connected(&self) -> Result<(), GraphError> {
        if self.n() == 0 {
            return Err(GraphError::Empty);
        }
        bfs_distances(self, 0).map(|_| ())
    }

    /// Subgraph on `keep` with nodes renumbered in ascending order.
    pub fn induced(&self, keep: &[NodeId]) -> Graph {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let index: BTreeMap<NodeId, NodeId> =
            sorted.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let edges: Vec<_> = self
            .edges()
            .filter_map(|(u, v)| Some((*index.get(&u)?, *index.get(&v)?)))
            .collect();
        Graph::from_edges(sorted.len(), &edges).expect("induced edges are valid")
    }
}

fn raw_bfs(g: &Graph, source: NodeId) -> Vec<Dist> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHED {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn bfs_distances(g: &Graph, source: NodeId) -> Result<Vec<Dist>, GraphError> {
    if source >= g.n() {
        return Err(GraphError::NodeOutOfRange { node: source, n: g.n() });
    }
    let dist = raw_bfs(g, source);
    match dist.iter().position(|&d| d == UNREACHED) {
        Some(unreachable) => Err(GraphError::Disconnected { from: source, unreachable }),
        None => Ok(dist),
    }
}

pub fn eccentricity(g: &Graph, u: NodeId) -> Result<Dist, GraphError> {
    Ok(bfs_distances(g, u)?.into_iter().max().unwrap_or(0))
}

pub fn all_eccentricities(g: &Graph, exec: Exec) -> Result<Vec<Dist>, GraphError> {
    par::try_map_indexed(exec, g.n(), |u| eccentricity(g, u))
}

pub fn diameter_bruteforce(g: &Graph) -> Result<Dist, GraphError> {
    if g.n() == 0 {
        return Err(GraphError::Empty);
    }
    Ok(all_eccentricities(g, Exec::default())?.into_iter().max().unwrap_or(0))
}

/// Two-sided graph used by the lower-bound reductions.
#[derive(Clone, Debug)]
pub struct BipartiteGadget {
    pub graph: Graph,
    pub left: Vec<NodeId>,
    pub right: Vec<NodeId>,
    pub cut_edges: Vec<(NodeId, NodeId)>,
    pub role_map: BTreeMap<String, NodeId>,
}

impl BipartiteGadget {
    pub fn is_left(&self, u: NodeId) -> bool {
        self.left.binary_search(&u).is_ok()
    }

    /// Checks the partition and cut-edge invariants.
    pub fn check(&self) -> Result<(), String> {
        let n = self.graph.n();
        if self.left.len() + self.right.len() != n {
            return Err("left and right do not cover the node set".into());
        }
        let mut seen = vec![false; n];
        for &u in self.left.iter().chain(&self.right) {
            if u >= n || std::mem::replace(&mut seen[u], true) {
                return Err(format!("node {u} repeated or out of range"));
            }
        }
        for &(u, v) in &self.cut_edges {
            if !self.is_left(u) || self.is_left(v) || !self.graph.has_edge(u, v) {
                return Err(format!("cut edge ({u}, {v}) does not cross the partition"));
            }
        }
        Ok(())
    }
}

/// Largest distance between a left and a right vertex.
pub fn bipartite_delta(gad: &BipartiteGadget) -> Result<Dist, GraphError> {
    bipartite_delta_of(&gad.graph, &gad.left, &gad.right)
}

pub fn bipartite_delta_of(g: &Graph, left: &[NodeId], right: &[NodeId]) -> Result<Dist, GraphError> {
    let per_left = par::try_map_indexed(Exec::default(), left.len(), |i| {
        let dist = bfs_distances(g, left[i])?;
        Ok(right.iter().map(|&v| dist[v]).max().unwrap_or(0))
    })?;
    Ok(per_left.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn path_distances() {
        assert_eq!(bfs_distances(&path(3), 0).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn star_eccentricities() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(eccentricity(&g, 0).unwrap(), 1);
        assert_eq!(eccentricity(&g, 3).unwrap(), 2);
    }

    #[test]
    fn cycle_and_clique_diameter() {
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        assert_eq!(diameter_bruteforce(&Graph::from_edges(6, &c6).unwrap()).unwrap(), 3);
        let mut k5 = Vec::new();
        for u in 0..5 {
            for v in u + 1..5 {
                k5.push((u, v));
            }
        }
        assert_eq!(diameter_bruteforce(&Graph::from_edges(5, &k5).unwrap()).unwrap(), 1);
    }

    #[test]
    fn disconnected_names_node() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            bfs_distances(&g, 0),
            Err(GraphError::Disconnected { from: 0, unreachable: 2 })
        );
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::NodeOutOfRange { node: 2, .. })
        ));
    }

    #[test]
    fn duplicates_collapse() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2)]).unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }
}
