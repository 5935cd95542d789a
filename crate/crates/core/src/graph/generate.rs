use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Family {
    Path,
    Cycle,
    Star,
    Grid,
    Random(f64),
    Lollipop,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => write!(f, "path"),
            Family::Cycle => write!(f, "cycle"),
            Family::Star => write!(f, "star"),
            Family::Grid => write!(f, "grid"),
            Family::Random(p) => write!(f, "random:{p}"),
            Family::Lollipop => write!(f, "lollipop"),
        }
    }
}

impl FromStr for Family {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::InvalidParameters(format!("unknown family {s:?}"));
        Ok(match s {
            "path" => Family::Path,
            "cycle" => Family::Cycle,
            "star" => Family::Star,
            "grid" => Family::Grid,
            "lollipop" => Family::Lollipop,
            _ => {
                let p = s.strip_prefix("random:").ok_or_else(bad)?;
                let p: f64 = p.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(bad());
                }
                Family::Random(p)
            }
        })
    }
}

impl TryFrom<String> for Family {
    type Error = GraphError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Family> for String {
    fn from(f: Family) -> String {
        f.to_string()
    }
}

/// Deterministic generator. Only `Random` consumes the seed. Random graphs
/// are made connected by joining each stray component to the part already
/// reached from node 0.
pub fn generate(family: Family, n: usize, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    match family {
        Family::Path => edges.extend((1..n).map(|i| (i - 1, i))),
        Family::Cycle => {
            if n < 3 {
                return Err(GraphError::InvalidParameters("cycle needs n >= 3".into()));
            }
            edges.extend((0..n).map(|i| (i, (i + 1) % n)));
        }
        Family::Star => edges.extend((1..n).map(|i| (0, i))),
        Family::Grid => {
            let rows = (n as f64).sqrt().floor().max(1.0) as usize;
            let cols = n.div_ceil(rows);
            for i in 0..n {
                if (i + 1) % cols != 0 && i + 1 < n {
                    edges.push((i, i + 1));
                }
                if i + cols < n {
                    edges.push((i, i + cols));
                }
            }
        }
        Family::Lollipop => {
            let k = n.div_ceil(2);
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((u, v));
                }
            }
            edges.extend((k..n).map(|i| (i - 1, i)));
        }
        Family::Random(p) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            connect_components(n, &mut edges, &mut rng);
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    g.require_connected()?;
    Ok(g)
}

fn connect_components(n: usize, edges: &mut Vec<(NodeId, NodeId)>, rng: &mut ChaCha8Rng) {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges.iter() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut reached: Vec<NodeId> = (0..n).filter(|&u| find(&mut parent, u) == find(&mut parent, 0)).collect();
    for u in 0..n {
        let root = find(&mut parent, u);
        if root != find(&mut parent, 0) && root == u {
            let anchor = reached[rng.gen_range(0..reached.len())];
            edges.push((anchor, u));
            let members: Vec<NodeId> = (0..n).filter(|&w| find(&mut parent, w) == root).collect();
            parent[root] = find(&mut parent, 0);
            reached.extend(members);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::diameter_bruteforce;

    #[test]
    fn family_round_trip() {
        for f in ["path", "cycle", "star", "grid", "random:0.05", "lollipop"] {
            assert_eq!(f.parse::<Family>().unwrap().to_string(), f);
        }
        assert!("random:2".parse::<Family>().is_err());
        assert!("tree".parse::<Family>().is_err());
    }

    #[test]
    fn deterministic_families() {
        assert_eq!(diameter_bruteforce(&generate(Family::Path, 10, 0).unwrap()).unwrap(), 9);
        assert_eq!(diameter_bruteforce(&generate(Family::Cycle, 7, 0).unwrap()).unwrap(), 3);
        assert_eq!(diameter_bruteforce(&generate(Family::Star, 6, 0).unwrap()).unwrap(), 2);
        let grid = generate(Family::Grid, 12, 0).unwrap();
        assert_eq!(grid.m(), 17);
        assert_eq!(diameter_bruteforce(&grid).unwrap(), 5);
        let lolli = generate(Family::Lollipop, 10, 0).unwrap();
        assert_eq!(lolli.m(), 10 + 5);
        assert_eq!(diameter_bruteforce(&lolli).unwrap(), 6);
    }

    #[test]
    fn sparse_random_is_connected_and_seeded() {
        for seed in 0..20 {
            let a = generate(Family::Random(0.05), 32, seed).unwrap();
            assert!(a.is_connected());
            assert_eq!(a, generate(Family::Random(0.05), 32, seed).unwrap());
        }
        assert_ne!(
            generate(Family::Random(0.2), 32, 1).unwrap(),
            generate(Family::Random(0.2), 32, 2).unwrap()
        );
    }
}
