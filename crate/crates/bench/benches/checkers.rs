use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ltt_bench::{counter, random_sample};
use ltt_core::lt::is_locally_testable_fast;
use ltt_core::ltt::is_locally_threshold_testable;
use ltt_core::semigroup::{oracle_is_ltt, DEFAULT_BUDGET};
use ltt_core::CheckOptions;

fn ltt(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let mut group = c.benchmark_group("ltt");
    group.sample_size(10);
    for n in [10, 20, 40] {
        let sample = random_sample(n, 8, n as u64);
        group.bench_with_input(BenchmarkId::new("random", n), &sample, |b, sample| {
            b.iter(|| {
                for d in sample {
                    black_box(is_locally_threshold_testable(d, &opts).unwrap());
                }
            })
        });
        let d = counter(n);
        group.bench_with_input(BenchmarkId::new("counter", n), &d, |b, d| {
            b.iter(|| black_box(is_locally_threshold_testable(d, &opts).unwrap()))
        });
    }
    group.finish();
}

fn lt(c: &mut Criterion) {
    let opts = CheckOptions::default();
    let mut group = c.benchmark_group("lt-fast");
    for n in [50, 100, 200, 400] {
        let sample = random_sample(n, 8, n as u64);
        group.bench_with_input(BenchmarkId::new("random", n), &sample, |b, sample| {
            b.iter(|| {
                for d in sample {
                    black_box(is_locally_testable_fast(d, &opts).unwrap());
                }
            })
        });
        let d = counter(n);
        group.bench_with_input(BenchmarkId::new("counter", n), &d, |b, d| {
            b.iter(|| black_box(is_locally_testable_fast(d, &opts).unwrap()))
        });
    }
    group.finish();
}

fn semigroup(c: &mut Criterion) {
    let mut group = c.benchmark_group("semigroup-oracle");
    for n in [4, 5, 6] {
        let sample = random_sample(n, 16, 100 + n as u64);
        group.bench_with_input(BenchmarkId::new("random", n), &sample, |b, sample| {
            b.iter(|| {
                for d in sample {
                    black_box(oracle_is_ltt(d, DEFAULT_BUDGET).unwrap().0);
                }
            })
        });
    }
    group.finish();
}

criterion_group!(benches, ltt, lt, semigroup);
criterion_main!(benches);
