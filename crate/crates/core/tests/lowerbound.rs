use qcongest::graph::{bipartite_delta_of, diameter_bruteforce, parse_edge_list, write_edge_list};
use qcongest::lowerbound::{
    build_two_party_schedule, closed_form_messages, execute_direct, execute_schedule_classical, gadget_build, gadget_with_inputs,
    reduction_protocol_cost, stretch, validate_schedule, BitExchange, DisjInput, Equality, Party,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn gadget_delta_decides_disjointness_exhaustively() {
    let gad = gadget_build(10).unwrap();
    for x in 0..16 {
        for y in 0..16 {
            let inp = DisjInput::from_bits(4, x, y);
            let h = gadget_with_inputs(&gad, &inp).unwrap();
            let delta = bipartite_delta_of(&h.graph, &h.left, &h.right).unwrap();
            assert_eq!(delta <= 2, inp.disjoint(), "x={x:04b} y={y:04b} delta={delta}");
            assert_eq!(h.cut_edges, gad.cut_edges);
        }
    }
}

#[test]
fn gadget_delta_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in [14, 18, 22] {
        let gad = gadget_build(n).unwrap();
        let k = ((n - 2) / 4).pow(2);
        for _ in 0..200 {
            let inp = DisjInput::random(k, &mut rng);
            let h = gadget_with_inputs(&gad, &inp).unwrap();
            assert_eq!(bipartite_delta_of(&h.graph, &h.left, &h.right).unwrap() <= 2, inp.disjoint());
        }
    }
}

#[test]
fn stretched_gadget_shape() {
    let gad = gadget_with_inputs(&gadget_build(10).unwrap(), &DisjInput::from_bits(4, 0b1010, 0b0101)).unwrap();
    for d in 1..=4u32 {
        let st = stretch(&gad, d).unwrap();
        let b = gad.cut_edges.len();
        assert_eq!(st.graph.n(), 10 + b * d as usize);
        assert_eq!(st.graph.m(), gad.graph.m() + b * d as usize);
        for j in 1..=d {
            assert_eq!(st.layer(j).len(), b);
        }
        assert!(diameter_bruteforce(&st.graph).unwrap() >= d);
        assert_eq!(parse_edge_list(&write_edge_list(&st.graph)).unwrap(), st.graph);
    }
}

#[test]
fn reduction_cost_formula() {
    assert_eq!(reduction_protocol_cost(5, 10, 3), (6, 6 * 5 * 4));
}

#[test]
fn schedule_json_lists_cells_and_messages() {
    let sched = build_two_party_schedule(5, 2);
    let v: serde_json::Value = serde_json::from_str(&sched.to_json()).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), sched.cells.len());
    assert_eq!(v["messages"].as_array().unwrap().len(), closed_form_messages(5, 2));
    let first = &v["cells"][0];
    for key in ["i", "t", "owner", "phase"] {
        assert!(first.get(key).is_some(), "{key}");
    }
    assert!(v["messages"][0]["registers"][0].as_str().unwrap().starts_with(['R', 'T']));
}

#[test]
fn message_count_is_at_most_turns_plus_one() {
    for r in 1..=40u64 {
        for d in 1..=8usize {
            let sched = build_two_party_schedule(r, d);
            let rep = validate_schedule(&sched, 8, 32);
            assert!(rep.ok(), "r={r} d={d}: {:?}", rep.first_violation());
            assert!(rep.messages as u64 <= r.div_ceil(d as u64) + 1);
            assert!(rep.max_payload <= rep.payload_bound);
            assert_eq!(sched.messages.last().map(|m| (m.sender, m.output)), Some((Party::Alice, true)));
        }
    }
}

#[test]
fn flipped_owner_is_a_violation() {
    let mut sched = build_two_party_schedule(12, 3);
    let c = sched.cells.iter().position(|c| c.phase == 2).unwrap();
    sched.cells[c].owner = sched.cells[c].owner.other();
    assert!(!validate_schedule(&sched, 8, 32).ok());
}

#[test]
fn classical_programs_agree_with_direct_runs() {
    for d in 1..=5 {
        let r = 2 * d as u64 + 3;
        let sched = build_two_party_schedule(r, d);
        let eq = Equality { d, k: 10 };
        for (x, y) in [(5, 5), (5, 6), (1023, 1023)] {
            let cmp = execute_schedule_classical(&eq, x, y, &sched).unwrap();
            assert!(cmp.ok());
            assert_eq!(cmp.two_party_output, (x == y) as u64);
        }
        let run = execute_direct(&BitExchange { k: 20 }, d, r, 0x1234, 0xbeef).unwrap();
        assert_eq!(run.output_a, 0xbeef);
        assert!(execute_schedule_classical(&BitExchange { k: 20 }, 0x1234, 0xbeef, &sched).unwrap().ok());
    }
}
