//! Criterion benchmarks for the decision engine. Run with and without the
//! `parallel` feature to compare the rayon batch paths against the
//! sequential fallback:
//!
//!   cargo bench -p aelsem
//!   cargo bench -p aelsem --no-default-features

use aelsem::{
    build_extremal_pair, decide_inclusion, enumerate, partition_classes, table1_experiment,
    GraphFamily, GraphFamilySpec, PrimeModulus,
};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn bench_inclusion_single(c: &mut Criterion) {
    let p = PrimeModulus::m31();
    let mut group = c.benchmark_group("decide_inclusion");
    for n in [6usize, 10, 14] {
        let (g, _) = build_extremal_pair(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                decide_inclusion(&g, &g, p, seed).unwrap()
            });
        });
    }
    group.finish();
}

fn bench_partition(c: &mut Criterion) {
    let p = PrimeModulus::m31();
    let graphs = enumerate(&GraphFamilySpec {
        family: GraphFamily::CompleteBaps,
        n: 3,
        allow_large: false,
    })
    .unwrap();
    c.bench_function("partition_complete_baps_n3", |b| {
        b.iter(|| partition_classes(&graphs, p, 1, 7).unwrap());
    });
}

fn bench_experiment_batch(c: &mut Criterion) {
    let p = PrimeModulus::m31();
    c.bench_function("experiment_n6_batch32", |b| {
        b.iter(|| table1_experiment(6, p, 32, 5).unwrap());
    });
}

criterion_group!(
    benches,
    bench_inclusion_single,
    bench_partition,
    bench_experiment_batch
);
criterion_main!(benches);
