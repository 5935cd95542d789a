//! Central DFS numbering of a rooted tree and the window sets `S(u)`.
//! These are oracles: the distributed procedures never build them.

use crate::graph::NodeId;

use super::{BfsTreeState, TreeLinks};

/// A rooted tree over a subset of the nodes, children in ascending id order.
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub root: NodeId,
    pub members: Vec<bool>,
    pub children: Vec<Vec<NodeId>>,
}

impl RootedTree {
    pub fn from_bfs(tree: &BfsTreeState, members: &[bool]) -> Self {
        let n = tree.parent.len();
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if members[v] && v != tree.leader {
                children[tree.parent[v]].push(v);
            }
        }
        RootedTree { root: tree.leader, members: members.to_vec(), children }
    }

    pub fn from_links(root: NodeId, links: &[TreeLinks]) -> Self {
        let n = links.len();
        let mut children = vec![Vec::new(); n];
        for (v, l) in links.iter().enumerate() {
            if l.member && v != root {
                if let Some(p) = l.parent {
                    children[p].push(v);
                }
            }
        }
        RootedTree { root, members: links.iter().map(|l| l.member).collect(), children }
    }

    pub fn size(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfsNumbering {
    /// First-visit step index; `None` for nodes outside the tree.
    pub tau: Vec<Option<u32>>,
    /// Closed walk from the root, `2(size − 1) + 1` entries.
    pub traversal: Vec<NodeId>,
}

impl DfsNumbering {
    /// Length of the closed walk, the modulus of the window arithmetic.
    pub fn period(&self) -> u32 {
        (self.traversal.len() - 1) as u32
    }

    /// `τ(v) − τ(u0)` reduced modulo the walk period.
    pub fn offset(&self, u0: NodeId, v: NodeId) -> Option<u32> {
        let (a, b) = (self.tau[u0]?, self.tau[v]?);
        let p = self.period();
        Some(if p == 0 { 0 } else { (b + p - a) % p })
    }
}

pub fn dfs_numbering(tree: &RootedTree) -> DfsNumbering {
    let n = tree.members.len();
    let mut tau = vec![None; n];
    let mut traversal = vec![tree.root];
    tau[tree.root] = Some(0);
    let mut stack: Vec<(NodeId, usize)> = vec![(tree.root, 0)];
    while let Some((v, next)) = stack.pop() {
        if let Some(&c) = tree.children[v].get(next) {
            stack.push((v, next + 1));
            tau[c] = Some(traversal.len() as u32);
            traversal.push(c);
            stack.push((c, 0));
        } else if let Some(&(p, _)) = stack.last() {
            traversal.push(p);
        }
    }
    DfsNumbering { tau, traversal }
}

/// Tree nodes whose offset from `u0` is at most `2d`, ascending.
pub fn set_s(u0: NodeId, d: u32, numbering: &DfsNumbering) -> Vec<NodeId> {
    (0..numbering.tau.len())
        .filter(|&v| numbering.offset(u0, v).is_some_and(|o| o <= 2 * d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(k: usize) -> RootedTree {
        let mut children = vec![Vec::new(); k + 1];
        children[0] = (1..=k).collect();
        RootedTree { root: 0, members: vec![true; k + 1], children }
    }

    #[test]
    fn path_numbering() {
        let t = RootedTree { root: 0, members: vec![true; 3], children: vec![vec![1], vec![2], vec![]] };
        let num = dfs_numbering(&t);
        assert_eq!(num.tau, vec![Some(0), Some(1), Some(2)]);
        assert_eq!(num.traversal, vec![0, 1, 2, 1, 0]);
        assert_eq!(set_s(0, 2, &num), vec![0, 1, 2]);
    }

    #[test]
    fn star_leaves_are_odd() {
        let num = dfs_numbering(&star(3));
        for k in 1..=3 {
            assert_eq!(num.tau[k], Some(2 * k as u32 - 1));
        }
        assert_eq!(num.period(), 6);
    }

    #[test]
    fn window_wraps_to_root() {
        let num = dfs_numbering(&star(4));
        // From leaf 4 (τ = 7) the window covers steps 7, 8 ≡ 0 and 9 ≡ 1.
        assert_eq!(set_s(4, 1, &num), vec![0, 1, 4]);
        assert_eq!(set_s(3, 1, &num), vec![3, 4]);
    }

    #[test]
    fn single_node_tree() {
        let t = RootedTree { root: 0, members: vec![true], children: vec![vec![]] };
        let num = dfs_numbering(&t);
        assert_eq!(num.period(), 0);
        assert_eq!(set_s(0, 0, &num), vec![0]);
    }
}
