use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use edgeconn_core::graph::gen_random;
use edgeconn_core::{all_pairs_oracle, solve_apc, solve_kapc, Digraph, FieldConfig, FieldMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SIZES: [(usize, usize); 3] = [(20, 100), (40, 300), (60, 600)];

fn graph(n: usize, m: usize) -> Digraph {
    gen_random(n, m, false, &mut ChaCha8Rng::seed_from_u64(0)).expect("m fits")
}

fn solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("solvers");
    group.sample_size(10);
    for (n, m) in SIZES {
        let g = graph(n, m);
        let label = format!("{n}:{m}");
        group.bench_with_input(BenchmarkId::new("oracle", &label), &g, |b, g| {
            b.iter(|| all_pairs_oracle(g))
        });
        group.bench_with_input(BenchmarkId::new("apc", &label), &g, |b, g| {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            b.iter(|| solve_apc(g, &mut rng).expect("solvable"))
        });
        for k in [1, 2] {
            group.bench_with_input(
                BenchmarkId::new(format!("kapc_k{k}"), &label),
                &g,
                |b, g| {
                    let mut rng = ChaCha8Rng::seed_from_u64(1);
                    b.iter(|| solve_kapc(g, k, &mut rng).expect("solvable"))
                },
            );
        }
    }
    group.finish();
}

fn inversion(c: &mut Criterion) {
    let mut group = c.benchmark_group("invert");
    group.sample_size(10);
    for dim in [120, 360, 600] {
        let field = FieldConfig::GF2_64;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = FieldMatrix::random(field, dim, dim, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| a.invert())
        });
    }
    group.finish();
}

criterion_group!(benches, solvers, inversion);
criterion_main!(benches);
