use num_complex::Complex64;
use proptest::prelude::*;
use qcongest::quantum::{
    amplitude_amplify_decide, call_budget, grover_iterate, quantum_maximize, setup_subset, setup_uniform, AmplitudeState,
    QOptConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Matrix = Vec<Vec<Complex64>>;

/// `(2|s⟩⟨s| − I)·(I − 2Π_marked)` built entry by entry.
fn grover_matrix(setup: &[Complex64], marked: &[bool]) -> Matrix {
    let n = setup.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let reflect = setup[i] * setup[j].conj() * 2.0 - if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                    if marked[j] {
                        -reflect
                    } else {
                        reflect
                    }
                })
                .collect()
        })
        .collect()
}

fn apply(m: &Matrix, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> AmplitudeState {
    let amps = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    AmplitudeState::from_amplitudes(amps).unwrap()
}

#[test]
fn iterate_matches_explicit_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1usize, 2, 3, 7, 16, 33, 64] {
        let marked: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.3)).collect();
        let mut s = random_state(n, &mut rng);
        let m = grover_matrix(s.setup_amplitudes(), &marked);
        let mut v = s.amplitudes().to_vec();
        for _ in 0..5 {
            grover_iterate(&mut s, |x| marked[x]).unwrap();
            v = apply(&m, &v);
        }
        let err = s.amplitudes().iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "n={n} err={err}");
    }
}

#[test]
fn iterate_on_subset_setup_matches_matrix() {
    let s0 = setup_subset(20, &[0, 3, 4, 9, 15]).unwrap();
    let marked: Vec<bool> = (0..20).map(|x| x == 9 || x == 12).collect();
    let m = grover_matrix(s0.setup_amplitudes(), &marked);
    let mut s = s0.clone();
    let mut v = s.amplitudes().to_vec();
    for _ in 0..8 {
        grover_iterate(&mut s, |x| marked[x]).unwrap();
        v = apply(&m, &v);
    }
    for (a, b) in s.amplitudes().iter().zip(&v) {
        assert!((a - b).norm() < 1e-12);
    }
    assert!(s.amplitudes()[12].norm() < 1e-12);
}

#[test]
fn success_follows_sine_recurrence() {
    for (n, marked) in [(64usize, 1usize), (64, 8), (128, 32), (10, 5)] {
        let theta = (marked as f64 / n as f64).sqrt().asin();
        let mut s = setup_uniform(n).unwrap();
        for k in 0..=50 {
            let want = ((2 * k + 1) as f64 * theta).sin().powi(2);
            assert!((s.probability(|x| x < marked) - want).abs() < 1e-9, "n={n} k={k}");
            grover_iterate(&mut s, |x| x < marked).unwrap();
        }
    }
}

proptest! {
    #[test]
    fn iterations_preserve_norm(n in 1usize..200, seed in any::<u64>(), steps in 0usize..20, density in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let marked: Vec<bool> = (0..n).map(|_| rng.gen_bool(density)).collect();
        let mut s = random_state(n, &mut rng);
        for _ in 0..steps {
            grover_iterate(&mut s, |x| marked[x]).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn search_stays_within_call_budget(n in 2usize..80, seed in any::<u64>(), delta in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: Vec<u64> = (0..n).map(|_| rng.gen_range(0..10)).collect();
        let eps = 1.0 / n as f64;
        let (_, cost) = quantum_maximize(|x| f[x], &setup_uniform(n).unwrap(), &QOptConfig::new(eps, delta, seed)).unwrap();
        prop_assert!(cost.calls() <= call_budget(eps, delta), "{} > {}", cost.calls(), call_budget(eps, delta));
        prop_assert!(cost.eval_calls >= 1 && cost.setup_calls >= 1);
    }
}

#[test]
fn decide_finds_marked_and_is_uniform_over_them() {
    let s = setup_uniform(64).unwrap();
    let marked = |x: usize| x % 16 == 5;
    let mut hits = [0u32; 4];
    let mut found = 0;
    for seed in 0..1000 {
        let (x, _) = amplitude_amplify_decide(&s, marked, 1.0 / 16.0, 0.1, seed).unwrap();
        if let Some(x) = x {
            assert!(marked(x));
            hits[x / 16] += 1;
            found += 1;
        }
    }
    assert!(found >= 900, "found {found} of 1000");
    let expect = found as f64 / 4.0;
    let chi2: f64 = hits.iter().map(|&h| (h as f64 - expect).powi(2) / expect).sum();
    // 3 degrees of freedom, p = 0.001.
    assert!(chi2 < 16.27, "chi2 = {chi2}, hits {hits:?}");
}

#[test]
fn maximize_succeeds_with_probability_one_minus_delta() {
    let delta = 0.05;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f: Vec<u64> = (0..50).map(|_| rng.gen_range(0..1000)).collect();
    let best = *f.iter().max().unwrap();
    let s = setup_uniform(50).unwrap();
    let wins = (0..500)
        .filter(|&seed| {
            let (x, cost) = quantum_maximize(|x| f[x], &s, &QOptConfig::new(1.0 / 50.0, delta, seed)).unwrap();
            !cost.aborted && f[x] == best
        })
        .count();
    assert!(wins as f64 >= (1.0 - delta) * 500.0, "{wins} of 500");
}
