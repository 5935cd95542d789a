#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use qcongest::graph::{
    all_eccentricities, bfs_distances, diameter_bruteforce, generate, parse_edge_list, write_edge_list, Family, Graph,
};
use qcongest::par::Exec;

const INF: u32 = u32::MAX / 4;

fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for &v in g.neighbors(u) {
            d[u][v] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

/// Boolean powers of `I + A` up to `n − 1`.
fn reachable(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.n();
    let mut r: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u == v || g.has_edge(u, v)).collect()).collect();
    for _ in 0..n {
        let next: Vec<Vec<bool>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).any(|k| r[i][k] && (k == j || g.has_edge(k, j)))).collect()).collect();
        if next == r {
            break;
        }
        r = next;
    }
    r
}

fn arbitrary_graph() -> impl Strategy<Value = Graph> {
    (1usize..18).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n)
            .prop_map(move |e| Graph::from_edges(n, &e.into_iter().filter(|(u, v)| u != v).collect::<Vec<_>>()).unwrap())
    })
}

fn connected_graph() -> impl Strategy<Value = Graph> {
    (2usize..40, 0.0f64..0.5, any::<u64>()).prop_map(|(n, p, seed)| generate(Family::Random(p), n, seed).unwrap())
}

proptest! {
    #[test]
    fn bfs_matches_floyd_warshall(g in connected_graph()) {
        let fw = floyd_warshall(&g);
        for u in 0..g.n() {
            prop_assert_eq!(&bfs_distances(&g, u).unwrap(), &fw[u]);
        }
    }

    #[test]
    fn connectivity_matches_matrix_powers(g in arbitrary_graph()) {
        let r = reachable(&g);
        prop_assert_eq!(g.is_connected(), r[0].iter().all(|&b| b));
        for u in 0..g.n() {
            prop_assert_eq!(bfs_distances(&g, u).is_ok(), r[u].iter().all(|&b| b));
        }
    }

    #[test]
    fn distances_satisfy_triangle_inequality(g in connected_graph()) {
        let d: Vec<Vec<u32>> = (0..g.n()).map(|u| bfs_distances(&g, u).unwrap()).collect();
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(d[u][v], d[v][u]);
                for w in 0..g.n() {
                    prop_assert!(d[u][w] <= d[u][v] + d[v][w]);
                }
            }
        }
    }

    #[test]
    fn every_eccentricity_brackets_the_diameter(g in connected_graph()) {
        let diam = diameter_bruteforce(&g).unwrap();
        for e in all_eccentricities(&g, Exec::Sequential).unwrap() {
            prop_assert!(e <= diam && diam <= 2 * e);
        }
    }

    #[test]
    fn edge_list_round_trip(g in connected_graph()) {
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }
}

#[test]
fn family_diameters() {
    let cases = [
        (Family::Path, 10, 9),
        (Family::Cycle, 10, 5),
        (Family::Cycle, 11, 5),
        (Family::Star, 9, 2),
        (Family::Grid, 16, 6),
    ];
    for (f, n, want) in cases {
        assert_eq!(diameter_bruteforce(&generate(f, n, 0).unwrap()).unwrap(), want, "{f}/{n}");
    }
}

#[test]
fn exec_modes_agree_on_eccentricities() {
    let g = generate(Family::Random(0.05), 200, 9).unwrap();
    assert_eq!(all_eccentricities(&g, Exec::Sequential).unwrap(), all_eccentricities(&g, Exec::Parallel).unwrap());
}
