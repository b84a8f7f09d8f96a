use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lemcodec::ks::{ks_distance, ks_pvalue};
use lemcodec_bench::sorted_uniform;

fn distance(c: &mut Criterion) {
    let mut group = c.benchmark_group("ks_distance");
    for n in [16usize, 64, 256, 1024] {
        let a = sorted_uniform(n, 1);
        let b = sorted_uniform(n, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |bench, _| {
            bench.iter(|| ks_distance(black_box(&a), black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn pvalue(c: &mut Criterion) {
    let mut group = c.benchmark_group("ks_pvalue");
    for d in [0.05, 0.3, 0.9] {
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |bench, &d| {
            bench.iter(|| ks_pvalue(black_box(d), 32, 32))
        });
    }
    group.finish();
}

criterion_group!(benches, distance, pvalue);
criterion_main!(benches);
