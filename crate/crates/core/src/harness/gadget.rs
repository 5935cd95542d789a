use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::graph::{bipartite_delta_of, diameter_bruteforce, Dist, Graph};
use crate::lowerbound::{gadget_build, gadget_with_inputs, stretch, DisjInput, GadgetLayout, LowerBoundError};

#[derive(Clone, Debug)]
pub enum GadgetInputs {
    Explicit { x: String, y: String },
    Random { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct GadgetRequest {
    pub n: usize,
    pub d: u32,
    pub inputs: GadgetInputs,
}

#[derive(Clone, Debug, Serialize)]
pub struct GadgetReport {
    pub n: usize,
    pub s: usize,
    pub k: usize,
    pub d: u32,
    pub x: String,
    pub y: String,
    pub disj: bool,
    /// Largest left-to-right distance of the unstretched graph.
    pub delta: Dist,
    pub diameter: Dist,
    pub stretched_nodes: usize,
    /// `Δ ≤ 2` exactly when the inputs are disjoint.
    pub gap_holds: bool,
    #[serde(skip)]
    pub graph: Graph,
}

impl GadgetReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "gadget n={} s={} k={} stretch d={} (nodes {})", self.n, self.s, self.k, self.d, self.stretched_nodes);
        let _ = writeln!(out, "x={} y={}", self.x, self.y);
        let _ = writeln!(out, "DISJ={} delta={} diameter={}", self.disj as u8, self.delta, self.diameter);
        let _ = writeln!(out, "gap verdict: {}", if self.gap_holds { "holds" } else { "VIOLATED" });
        out
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn cmd_gadget(req: &GadgetRequest) -> Result<GadgetReport, LowerBoundError> {
    let lay = GadgetLayout::for_n(req.n)?;
    let gad = gadget_build(req.n)?;
    let inp = match &req.inputs {
        GadgetInputs::Explicit { x, y } => DisjInput::parse(x, y)?,
        GadgetInputs::Random { seed } => DisjInput::random(lay.k(), &mut ChaCha8Rng::seed_from_u64(*seed)),
    };
    let with = gadget_with_inputs(&gad, &inp)?;
    let delta = bipartite_delta_of(&with.graph, &with.left, &with.right)?;
    let st = stretch(&with, req.d)?;
    let diameter = diameter_bruteforce(&st.graph)?;
    let disj = inp.disjoint();
    Ok(GadgetReport {
        n: req.n,
        s: lay.s,
        k: lay.k(),
        d: req.d,
        x: bits(&inp.x),
        y: bits(&inp.y),
        disj,
        delta,
        diameter,
        stretched_nodes: st.graph.n(),
        gap_holds: (delta <= 2) == disj,
        graph: st.graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersecting_inputs() {
        let req = GadgetRequest { n: 10, d: 2, inputs: GadgetInputs::Explicit { x: "1111".into(), y: "1111".into() } };
        let r = cmd_gadget(&req).unwrap();
        assert_eq!((r.disj, r.delta, r.stretched_nodes), (false, 3, 20));
        assert!(r.gap_holds);
        assert!(r.to_text().contains("holds"));
    }

    #[test]
    fn random_inputs_have_right_length() {
        let r = cmd_gadget(&GadgetRequest { n: 26, d: 0, inputs: GadgetInputs::Random { seed: 4 } }).unwrap();
        assert_eq!(r.x.len(), 36);
        assert!(r.gap_holds);
    }
}
