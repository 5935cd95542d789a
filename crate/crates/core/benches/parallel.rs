//! Sequential against rayon execution of the data-parallel kernels.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qcongest::diameter::{prepare_exact, DiameterConfig};
use qcongest::graph::{all_eccentricities, generate, Family};
use qcongest::par::Exec;
use qcongest::quantum::{grover_iterate, setup_uniform};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn branch_table(c: &mut Criterion) {
    let mut group = c.benchmark_group("branch_table");
    group.sample_size(10);
    for n in [32, 64] {
        let g = generate(Family::Random(0.1), n, 1).unwrap();
        for (name, exec) in MODES {
            let cfg = DiameterConfig { exec, ..DiameterConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &g, |b, g| b.iter(|| prepare_exact(g, &cfg).unwrap()));
        }
    }
    group.finish();
}

fn grover(c: &mut Criterion) {
    let mut group = c.benchmark_group("grover_iterate");
    for size in [1 << 12, 1 << 16, 1 << 20] {
        for (name, exec) in MODES {
            let mut s = setup_uniform(size).unwrap().with_exec(exec);
            group.bench_with_input(BenchmarkId::new(name, size), &size, |b, _| {
                b.iter(|| grover_iterate(&mut s, |x| x % 1021 == 7).unwrap())
            });
        }
    }
    group.finish();
}

fn eccentricities(c: &mut Criterion) {
    let mut group = c.benchmark_group("all_eccentricities");
    let g = generate(Family::Random(0.01), 2000, 3).unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| all_eccentricities(&g, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, branch_table, grover, eccentricities);
criterion_main!(benches);
