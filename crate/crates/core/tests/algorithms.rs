use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use qcongest::diameter::{
    approx_diameter, exact_diameter, exact_diameter_simple, prepare_exact, three_halves_ceil, DiameterConfig, DiameterError,
};
use qcongest::engine::default_bandwidth;
use qcongest::graph::{all_eccentricities, diameter_bruteforce, eccentricity, generate, Family, Graph};
use qcongest::par::Exec;
use qcongest::procedures::{evaluation_procedure, initialize, set_s, EvalTree};

fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..22, 0.05f64..0.6, any::<u64>()).prop_map(|(n, p, seed)| generate(Family::Random(p), n, seed).unwrap())
}

proptest! {
    // Fixed seed: the randomized algorithms may fail with probability δ.
    #![proptest_config(ProptestConfig { cases: 48, rng_seed: RngSeed::Fixed(7), ..ProptestConfig::default() })]

    #[test]
    fn initialization_elects_a_consistent_leader(g in connected_graph()) {
        let init = initialize(&g, default_bandwidth(g.n()), false).unwrap();
        prop_assert_eq!(init.election.ecc_leader, eccentricity(&g, init.election.leader).unwrap());
        prop_assert!(init.tree.check(&g).is_ok());
    }

    #[test]
    fn branches_match_window_oracle(g in connected_graph()) {
        let n = g.n();
        let bw = default_bandwidth(n);
        let init = initialize(&g, bw, false).unwrap();
        let d = init.election.ecc_leader;
        let tree = EvalTree::new(init.election.leader, d, init.links);
        let ecc = all_eccentricities(&g, Exec::Sequential).unwrap();
        let mut covered = vec![0u32; n];
        for u0 in 0..n {
            let out = evaluation_procedure(&g, &tree, u0, bw).unwrap();
            let window = set_s(u0, d, &tree.numbering);
            prop_assert_eq!(out.value, window.iter().map(|&v| ecc[v]).max().unwrap());
            prop_assert!(out.cost.rounds <= 18 * d as u64);
            for v in window {
                covered[v] += 1;
            }
        }
        prop_assert!(covered.iter().all(|&c| c >= d.div_ceil(2)));
    }

    #[test]
    fn exact_algorithms_return_the_diameter(g in connected_graph(), seed in any::<u64>()) {
        let d = diameter_bruteforce(&g).unwrap();
        let cfg = DiameterConfig::with_seed(seed);
        prop_assert_eq!(exact_diameter(&g, &cfg).unwrap().d_out, d);
        prop_assert_eq!(exact_diameter_simple(&g, &cfg).unwrap().d_out, d);
    }

    #[test]
    fn approximation_brackets_the_diameter(g in connected_graph(), seed in any::<u64>()) {
        let d = diameter_bruteforce(&g).unwrap();
        let run = approx_diameter(&g, &DiameterConfig::with_seed(seed)).unwrap();
        prop_assert!(run.d_out <= d && d <= three_halves_ceil(run.d_out), "D={} got {}", d, run.d_out);
    }
}

#[test]
fn exec_modes_give_identical_runs() {
    let g = generate(Family::Random(0.1), 48, 7).unwrap();
    let mut cfg = DiameterConfig::with_seed(3);
    cfg.exec = Exec::Sequential;
    let a = exact_diameter(&g, &cfg).unwrap();
    let ta = prepare_exact(&g, &cfg).unwrap();
    cfg.exec = Exec::Parallel;
    let b = exact_diameter(&g, &cfg).unwrap();
    let tb = prepare_exact(&g, &cfg).unwrap();
    assert_eq!((a.d_out, a.cost.rounds, a.words(), a.x_best), (b.d_out, b.cost.rounds, b.words(), b.x_best));
    assert_eq!(a.search, b.search);
    assert_eq!(ta.values, tb.values);
}

#[test]
fn disconnected_graph_is_rejected() {
    let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
    assert!(matches!(exact_diameter(&g, &DiameterConfig::default()), Err(DiameterError::Graph(_))));
    assert!(approx_diameter(&g, &DiameterConfig::default()).is_err());
}

#[test]
fn rounds_grow_with_path_length() {
    let cfg = DiameterConfig { delta: Some(0.05), ..DiameterConfig::default() };
    let r: Vec<u64> = [16, 32, 64]
        .iter()
        .map(|&n| exact_diameter(&generate(Family::Path, n, 0).unwrap(), &cfg).unwrap().cost.rounds)
        .collect();
    assert!(r[0] < r[1] && r[1] < r[2], "{r:?}");
}
