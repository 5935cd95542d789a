use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diameter::Algorithm;
use crate::engine::default_bandwidth;
use crate::graph::{all_eccentricities, bfs_distances, bipartite_delta_of, generate, Family, Graph};
use crate::lowerbound::{
    build_two_party_schedule, execute_schedule_classical, gadget_build, gadget_with_inputs, stretched_gap, validate_schedule,
    DisjInput, GadgetLayout, RandomProgram,
};
use crate::par::{self, Exec};
use crate::procedures::{evaluation_procedure, initialize, set_s, EvalTree};
use crate::quantum::{grover_iterate, setup_uniform};
use crate::seed::derive;

use super::{cmd_run, ExperimentConfig};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{:<width$}  {}  {}", c.name, if c.ok { "PASS" } else { "FAIL" }, c.detail);
        }
        let passed = self.checks.iter().filter(|c| c.ok).count();
        let _ = writeln!(out, "{passed}/{} properties hold", self.checks.len());
        out
    }
}

fn check(name: &str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check { name: name.into(), ok: true, detail },
        Err(detail) => Check { name: name.into(), ok: false, detail },
    }
}

fn test_graphs() -> Vec<(String, Graph)> {
    let specs = [
        (Family::Path, 12, 0),
        (Family::Cycle, 11, 0),
        (Family::Star, 8, 0),
        (Family::Grid, 16, 0),
        (Family::Lollipop, 14, 0),
        (Family::Random(0.2), 16, 3),
        (Family::Random(0.1), 24, 5),
    ];
    specs
        .into_iter()
        .map(|(f, n, s)| (format!("{f}/{n}"), generate(f, n, s).expect("fixed test graph")))
        .collect()
}

/// Branch values, window sets, ordering of window members and round bound
/// of the evaluation procedure on every branch of every test graph.
fn evaluation_suite() -> Result<String, String> {
    let mut branches = 0;
    for (name, g) in test_graphs() {
        let n = g.n();
        let bw = default_bandwidth(n);
        let init = initialize(&g, bw, false).map_err(|e| format!("{name}: {e}"))?;
        let d = init.election.ecc_leader;
        let tree = EvalTree::new(init.election.leader, d, init.links);
        let ecc = all_eccentricities(&g, Exec::Sequential).map_err(|e| e.to_string())?;
        for u0 in 0..n {
            let out = evaluation_procedure(&g, &tree, u0, bw).map_err(|e| format!("{name} u0={u0}: {e}"))?;
            let want = set_s(u0, d, &tree.numbering).iter().map(|&v| ecc[v]).max().unwrap_or(0);
            if out.value != want {
                return Err(format!("{name} u0={u0}: value {} expected {want}", out.value));
            }
            if out.cost.rounds > 18 * d as u64 + 8 {
                return Err(format!("{name} u0={u0}: {} rounds with d={d}", out.cost.rounds));
            }
            for &(v, tv) in &out.s_set {
                let dist = bfs_distances(&g, v).map_err(|e| e.to_string())?;
                if let Some(&(w, tw)) = out.s_set.iter().find(|&&(w, tw)| tw > tv && dist[w] > tw - tv) {
                    return Err(format!("{name} u0={u0}: d({v},{w}) = {} exceeds {}", dist[w], tw - tv));
                }
            }
            branches += 1;
        }
    }
    Ok(format!("{branches} branches"))
}

fn coverage_suite() -> Result<String, String> {
    let mut worst = f64::INFINITY;
    for (name, g) in test_graphs() {
        let n = g.n();
        let init = initialize(&g, default_bandwidth(n), false).map_err(|e| e.to_string())?;
        let d = init.election.ecc_leader;
        let tree = EvalTree::new(init.election.leader, d, init.links);
        let mut count = vec![0u32; n];
        for u0 in 0..n {
            for v in set_s(u0, d, &tree.numbering) {
                count[v] += 1;
            }
        }
        let need = d.div_ceil(2);
        if let Some(v) = (0..n).find(|&v| count[v] < need) {
            return Err(format!("{name}: node {v} in {} windows, need {need}", count[v]));
        }
        let min = *count.iter().min().unwrap_or(&0);
        worst = worst.min(min as f64 / need.max(1) as f64);
    }
    Ok(format!("min count / ceil(d/2) = {}", super::fmt_float(worst)))
}

fn gadget_exceptions(n: usize, inputs: &[DisjInput]) -> Result<usize, String> {
    let gad = gadget_build(n).map_err(|e| e.to_string())?;
    let bad = par::try_map_indexed(Exec::default(), inputs.len(), |i| -> Result<bool, String> {
        let h = gadget_with_inputs(&gad, &inputs[i]).map_err(|e| e.to_string())?;
        let delta = bipartite_delta_of(&h.graph, &h.left, &h.right).map_err(|e| e.to_string())?;
        Ok((delta <= 2) != inputs[i].disjoint())
    })?;
    Ok(bad.into_iter().filter(|&b| b).count())
}

/// All `2^k × 2^k` input pairs.
pub(crate) fn all_inputs(k: usize) -> Vec<DisjInput> {
    let top = 1u64 << k;
    (0..top).flat_map(|x| (0..top).map(move |y| DisjInput::from_bits(k, x, y))).collect()
}

pub(crate) fn random_inputs(k: usize, count: usize, seed: u64) -> Vec<DisjInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| DisjInput::random(k, &mut rng)).collect()
}

fn gadget_suite() -> Result<String, String> {
    let small = gadget_exceptions(10, &all_inputs(4))?;
    let k26 = GadgetLayout::for_n(26).map_err(|e| e.to_string())?.k();
    let large = gadget_exceptions(26, &random_inputs(k26, 1000, 26))?;
    if small + large > 0 {
        return Err(format!("{small} exceptions at n=10, {large} at n=26"));
    }
    Ok("256 pairs at n=10, 1000 at n=26".into())
}

fn stretched_suite() -> Result<String, String> {
    let gad = gadget_build(10).map_err(|e| e.to_string())?;
    let inputs = all_inputs(4);
    let mut gaps = Vec::new();
    for d in 1..=4 {
        let st = stretched_gap(&gad, d, &inputs, Exec::default()).map_err(|e| e.to_string())?;
        match st.gap() {
            Some(gap) if gap > 0 && st.stable() => gaps.push(gap),
            _ => return Err(format!("d={d}: disjoint {:?} intersecting {:?}", st.disjoint, st.intersecting)),
        }
    }
    if gaps.windows(2).any(|w| w[0] != w[1]) {
        return Err(format!("gap varies with d: {gaps:?}"));
    }
    Ok(format!("gap {} for d=1..4", gaps[0]))
}

fn schedule_suite() -> Result<String, String> {
    let grid: Vec<(u64, usize)> = (1..=64).flat_map(|r| (1..=16).map(move |d| (r, d))).collect();
    let reports = par::map_indexed(Exec::default(), grid.len(), |i| {
        let (r, d) = grid[i];
        validate_schedule(&build_two_party_schedule(r, d), 8, 64)
    });
    for rep in &reports {
        if !rep.ok() {
            return Err(format!("r={} d={}: {}", rep.r, rep.d, rep.first_violation().unwrap_or("")));
        }
        if rep.messages != rep.closed_form || rep.closed_form as u64 > rep.r.div_ceil(rep.d as u64) + 1 {
            return Err(format!("r={} d={}: {} messages, closed form {}", rep.r, rep.d, rep.messages, rep.closed_form));
        }
    }
    Ok(format!("{} (r, d) pairs", reports.len()))
}

fn two_party_suite() -> Result<String, String> {
    let mut cells = 0;
    for k in 0..100u64 {
        let s = derive(0x7770, k);
        let (r, d) = (1 + s % 40, 1 + (s >> 8) as usize % 10);
        let program = RandomProgram { seed: s, width: 4 + (s >> 16) as u32 % 29 };
        let x = derive(s, 1);
        let y = derive(s, 2);
        let cmp = execute_schedule_classical(&program, x, y, &build_two_party_schedule(r, d)).map_err(|e| e.to_string())?;
        if !cmp.ok() {
            return Err(format!("program {k} (r={r}, d={d}): {:?}", cmp.mismatches.first()));
        }
        cells += cmp.cells_checked;
    }
    Ok(format!("100 programs, {cells} cells"))
}

fn grover_suite() -> Result<String, String> {
    let mut s = setup_uniform(4).map_err(|e| e.to_string())?;
    grover_iterate(&mut s, |x| x == 1).map_err(|e| e.to_string())?;
    let p = s.probability(|x| x == 1);
    if (p - 1.0).abs() > 1e-9 {
        return Err(format!("|X|=4: marked probability {p}"));
    }
    let mut worst = 0.0f64;
    for marked in [1, 2, 4, 8, 16, 32] {
        let theta = (marked as f64 / 64.0).sqrt().asin();
        let mut s = setup_uniform(64).map_err(|e| e.to_string())?;
        for k in 0..=50 {
            let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
            worst = worst.max((s.probability(|x| x < marked) - want).abs());
            grover_iterate(&mut s, |x| x < marked).map_err(|e| e.to_string())?;
        }
    }
    if worst > 1e-9 {
        return Err(format!("recurrence error {worst:e}"));
    }
    Ok(format!("max recurrence error {worst:.1e}"))
}

fn determinism_suite() -> Result<String, String> {
    let mut config = ExperimentConfig {
        families: vec![Family::Path, Family::Random(0.3)],
        sizes: vec![8, 12],
        seeds: vec![0, 1, 2],
        algorithms: Algorithm::ALL.to_vec(),
        ..ExperimentConfig::smoke()
    };
    let first = cmd_run(&config).map_err(|e| e.to_string())?;
    config.jobs = 4;
    let second = cmd_run(&config).map_err(|e| e.to_string())?;
    if first.csv != second.csv {
        return Err("tables differ between 1 and 4 jobs".into());
    }
    if !first.all_ok() {
        return Err("a run returned a wrong diameter".into());
    }
    Ok(format!("{} rows identical at 1 and 4 jobs", first.rows.len()))
}

type Suite = fn() -> Result<String, String>;

pub fn cmd_verify() -> VerifyReport {
    let suites: [(&str, Suite); 9] = [
        ("evaluation branches", evaluation_suite),
        ("window coverage", coverage_suite),
        ("gadget gap", gadget_suite),
        ("stretched gadget gap", stretched_suite),
        ("schedule grid", schedule_suite),
        ("two-party execution", two_party_suite),
        ("grover recurrence", grover_suite),
        ("run determinism", determinism_suite),
        ("parallel agreement", exec_suite),
    ];
    VerifyReport { checks: suites.into_iter().map(|(name, f)| check(name, f())).collect() }
}

fn exec_suite() -> Result<String, String> {
    let mut a = setup_uniform(1000).map_err(|e| e.to_string())?.with_exec(Exec::Sequential);
    let mut b = setup_uniform(1000).map_err(|e| e.to_string())?.with_exec(Exec::Parallel);
    for _ in 0..10 {
        grover_iterate(&mut a, |x| x % 97 == 3).map_err(|e| e.to_string())?;
        grover_iterate(&mut b, |x| x % 97 == 3).map_err(|e| e.to_string())?;
    }
    if a.amplitudes() != b.amplitudes() {
        return Err("sequential and parallel amplitudes differ".into());
    }
    Ok("bitwise equal amplitudes".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_table() {
        let r = VerifyReport {
            checks: vec![check("a", Ok("fine".into())), check("long name", Err("broken".into()))],
        };
        assert!(!r.all_ok());
        let text = r.to_text();
        assert!(text.contains("a          PASS  fine"));
        assert!(text.contains("1/2 properties hold"));
    }

    #[test]
    fn input_enumeration() {
        assert_eq!(all_inputs(2).len(), 16);
        assert_eq!(random_inputs(9, 5, 1).len(), 5);
    }
}
