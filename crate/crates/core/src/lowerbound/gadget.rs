use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::engine::ceil_log2;
use crate::graph::{diameter_bruteforce, BipartiteGadget, Dist, Graph, NodeId};
use crate::par::{self, Exec};

use super::LowerBoundError;

/// Node ids of the gadget with `s = (n − 2)/4`: `ℓ_i = i`, `ℓ′_i = s + i`,
/// `a = 2s`, `r_i = 2s + 1 + i`, `r′_i = 3s + 1 + i`, `b = 4s + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GadgetLayout {
    pub s: usize,
}

impl GadgetLayout {
    pub fn for_n(n: usize) -> Result<Self, LowerBoundError> {
        if n < 6 || n % 4 != 2 {
            return Err(LowerBoundError::InvalidSize(n));
        }
        Ok(GadgetLayout { s: (n - 2) / 4 })
    }

    pub fn n(&self) -> usize {
        4 * self.s + 2
    }

    /// Input length `k = s²`.
    pub fn k(&self) -> usize {
        self.s * self.s
    }

    pub fn l(&self, i: usize) -> NodeId {
        i
    }

    pub fn lp(&self, i: usize) -> NodeId {
        self.s + i
    }

    pub fn a(&self) -> NodeId {
        2 * self.s
    }

    pub fn r(&self, i: usize) -> NodeId {
        2 * self.s + 1 + i
    }

    pub fn rp(&self, i: usize) -> NodeId {
        3 * self.s + 1 + i
    }

    pub fn b(&self) -> NodeId {
        4 * self.s + 1
    }
}

/// A pair of `k`-bit inputs to set disjointness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjInput {
    pub k: usize,
    pub x: Vec<bool>,
    pub y: Vec<bool>,
}

impl DisjInput {
    pub fn new(x: Vec<bool>, y: Vec<bool>) -> Result<Self, LowerBoundError> {
        if x.len() != y.len() {
            return Err(LowerBoundError::InputLength { expected: x.len(), got: y.len() });
        }
        Ok(DisjInput { k: x.len(), x, y })
    }

    /// Low `k` bits of `x` and `y`, bit `i` at position `i`.
    pub fn from_bits(k: usize, x: u64, y: u64) -> Self {
        let bits = |v: u64| (0..k).map(|i| (v >> i) & 1 == 1).collect();
        DisjInput { k, x: bits(x), y: bits(y) }
    }

    pub fn random<R: Rng>(k: usize, rng: &mut R) -> Self {
        DisjInput { k, x: (0..k).map(|_| rng.gen()).collect(), y: (0..k).map(|_| rng.gen()).collect() }
    }

    /// `DISJ_k(x, y)`: true iff no index has `x_i = y_i = 1`.
    pub fn disjoint(&self) -> bool {
        !self.x.iter().zip(&self.y).any(|(&a, &b)| a && b)
    }

    /// Parses two strings of `0`/`1` characters.
    pub fn parse(x: &str, y: &str) -> Result<Self, LowerBoundError> {
        let bits = |s: &str| {
            s.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(LowerBoundError::InvalidParameter(format!("bit string {s:?} contains {c:?}"))),
                })
                .collect::<Result<Vec<bool>, _>>()
        };
        Self::new(bits(x)?, bits(y)?)
    }
}

fn clique(edges: &mut Vec<(NodeId, NodeId)>, nodes: &[NodeId]) {
    for (k, &u) in nodes.iter().enumerate() {
        for &v in &nodes[k + 1..] {
            edges.push((u, v));
        }
    }
}

fn base_edges(lay: GadgetLayout) -> Vec<(NodeId, NodeId)> {
    let s = lay.s;
    let part = |f: fn(&GadgetLayout, usize) -> NodeId| (0..s).map(|i| f(&lay, i)).collect::<Vec<_>>();
    let (l, lp, r, rp) = (part(GadgetLayout::l), part(GadgetLayout::lp), part(GadgetLayout::r), part(GadgetLayout::rp));
    let mut edges = Vec::new();
    for side in [&l, &lp, &r, &rp] {
        clique(&mut edges, side);
    }
    edges.extend(l.iter().chain(&lp).map(|&u| (u, lay.a())));
    edges.extend(r.iter().chain(&rp).map(|&u| (u, lay.b())));
    edges.extend(cut_edges(lay));
    edges
}

fn cut_edges(lay: GadgetLayout) -> Vec<(NodeId, NodeId)> {
    let s = lay.s;
    let mut cut: Vec<_> = (0..s).map(|i| (lay.l(i), lay.r(i))).collect();
    cut.extend((0..s).map(|i| (lay.lp(i), lay.rp(i))));
    cut.push((lay.a(), lay.b()));
    cut
}

fn assemble(lay: GadgetLayout, edges: &[(NodeId, NodeId)]) -> Result<BipartiteGadget, LowerBoundError> {
    let n = lay.n();
    let s = lay.s;
    let mut role_map = BTreeMap::new();
    for i in 0..s {
        role_map.insert(format!("l{i}"), lay.l(i));
        role_map.insert(format!("l'{i}"), lay.lp(i));
        role_map.insert(format!("r{i}"), lay.r(i));
        role_map.insert(format!("r'{i}"), lay.rp(i));
    }
    role_map.insert("a".into(), lay.a());
    role_map.insert("b".into(), lay.b());
    Ok(BipartiteGadget {
        graph: Graph::from_edges(n, edges)?,
        left: (0..=2 * s).collect(),
        right: (2 * s + 1..n).collect(),
        cut_edges: cut_edges(lay),
        role_map,
    })
}

/// The input-free gadget on `n ≡ 2 (mod 4)` nodes.
pub fn gadget_build(n: usize) -> Result<BipartiteGadget, LowerBoundError> {
    let lay = GadgetLayout::for_n(n)?;
    assemble(lay, &base_edges(lay))
}

fn input_edges(lay: GadgetLayout, inp: &DisjInput) -> Result<Vec<(NodeId, NodeId)>, LowerBoundError> {
    let s = lay.s;
    if inp.k != lay.k() {
        return Err(LowerBoundError::InputLength { expected: lay.k(), got: inp.k });
    }
    let mut edges = Vec::new();
    for i in 0..s {
        for j in 0..s {
            if !inp.x[i * s + j] {
                edges.push((lay.l(i), lay.lp(j)));
            }
            if !inp.y[i * s + j] {
                edges.push((lay.r(i), lay.rp(j)));
            }
        }
    }
    Ok(edges)
}

/// `Gₙ(x, y)`: the gadget plus `ℓ_i ℓ′_j` for every `x_{i,j} = 0` and
/// `r_i r′_j` for every `y_{i,j} = 0`, with `x_{i,j} = x[i·s + j]`.
pub fn gadget_apply_inputs(gad: &BipartiteGadget, inp: &DisjInput) -> Result<Graph, LowerBoundError> {
    Ok(gadget_with_inputs(gad, inp)?.graph)
}

/// [`gadget_apply_inputs`] keeping the partition and cut edges.
pub fn gadget_with_inputs(gad: &BipartiteGadget, inp: &DisjInput) -> Result<BipartiteGadget, LowerBoundError> {
    let lay = GadgetLayout::for_n(gad.graph.n())?;
    let mut edges: Vec<_> = gad.graph.edges().collect();
    edges.extend(input_edges(lay, inp)?);
    let mut out = assemble(lay, &edges)?;
    out.role_map = gad.role_map.clone();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct StretchedGadget {
    pub graph: Graph,
    pub base_n: usize,
    pub d: u32,
    /// Dummy node → (cut edge index, position `1..=d` from the left end).
    pub layer_map: BTreeMap<NodeId, (usize, u32)>,
}

impl StretchedGadget {
    /// Dummies of vertical layer `j`, ordered by cut edge.
    pub fn layer(&self, j: u32) -> Vec<NodeId> {
        self.layer_map.iter().filter(|(_, &(_, p))| p == j).map(|(&v, _)| v).collect()
    }
}

/// Replaces every cut edge by a path of `d + 1` edges through `d` new nodes.
/// The dummy at position `j` of cut edge `e` gets id `n + e·d + (j − 1)`.
pub fn stretch(gad: &BipartiteGadget, d: u32) -> Result<StretchedGadget, LowerBoundError> {
    let n = gad.graph.n();
    let du = d as usize;
    if d == 0 {
        return Ok(StretchedGadget { graph: gad.graph.clone(), base_n: n, d, layer_map: BTreeMap::new() });
    }
    let is_cut = |u: NodeId, v: NodeId| gad.cut_edges.iter().any(|&(a, b)| (a, b) == (u.min(v), u.max(v)) || (a, b) == (u, v));
    let mut edges: Vec<_> = gad.graph.edges().filter(|&(u, v)| !is_cut(u, v)).collect();
    let mut layer_map = BTreeMap::new();
    for (e, &(a, b)) in gad.cut_edges.iter().enumerate() {
        let (left, right) = if gad.is_left(a) { (a, b) } else { (b, a) };
        let dummy = |j: usize| n + e * du + (j - 1);
        edges.push((left, dummy(1)));
        for j in 1..du {
            edges.push((dummy(j), dummy(j + 1)));
        }
        edges.push((dummy(du), right));
        for j in 1..=du {
            layer_map.insert(dummy(j), (e, j as u32));
        }
    }
    let graph = Graph::from_edges(n + gad.cut_edges.len() * du, &edges)?;
    Ok(StretchedGadget { graph, base_n: n, d, layer_map })
}

/// Two-party cost of simulating `r` rounds across `b` cut edges in an
/// `n`-node network: two messages per round, each carrying one
/// `⌈log₂ n⌉`-qubit word per cut edge and direction.
pub fn reduction_protocol_cost(b: usize, n: usize, r: u64) -> (u64, u64) {
    (2 * r, 2 * r * b as u64 * ceil_log2(n as u64) as u64)
}

/// Diameters of stretched gadgets `G′ₙ(x, y)` split by the value of
/// `DISJ(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapStats {
    pub d: u32,
    pub disjoint: BTreeSet<Dist>,
    pub intersecting: BTreeSet<Dist>,
}

impl GapStats {
    /// Smallest intersecting diameter minus largest disjoint one.
    pub fn gap(&self) -> Option<i64> {
        Some(*self.intersecting.first()? as i64 - *self.disjoint.last()? as i64)
    }

    /// Each class has a single diameter value.
    pub fn stable(&self) -> bool {
        self.disjoint.len() <= 1 && self.intersecting.len() <= 1
    }
}

pub fn stretched_gap(gad: &BipartiteGadget, d: u32, inputs: &[DisjInput], exec: Exec) -> Result<GapStats, LowerBoundError> {
    let diam = par::try_map_indexed(exec, inputs.len(), |k| -> Result<Dist, LowerBoundError> {
        let st = stretch(&gadget_with_inputs(gad, &inputs[k])?, d)?;
        Ok(diameter_bruteforce(&st.graph)?)
    })?;
    let mut stats = GapStats { d, disjoint: BTreeSet::new(), intersecting: BTreeSet::new() };
    for (inp, dm) in inputs.iter().zip(diam) {
        if inp.disjoint() {
            stats.disjoint.insert(dm);
        } else {
            stats.intersecting.insert(dm);
        }
    }
    Ok(stats)
}
