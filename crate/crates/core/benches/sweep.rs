// SPDX-License-Identifier: MIT OR Apache-2.0

//! Sequential against parallel execution for the direct sweep and the
//! decomposition, plus the prefix-sum sweep against the O(N h) reference.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use msi_core::arith::{GSpec, SupportCutoff};
use msi_core::integral::{
    selberg_integral, selberg_integral_decomposed_with, selberg_integral_direct_with, selberg_integral_naive,
    DecompositionOptions, IntegralConfig,
};
use msi_core::short_sums::FejerWindow;
use msi_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn direct(c: &mut Criterion) {
    let mut group = c.benchmark_group("direct");
    group.sample_size(10);
    for (n, h, q) in [(100_000, 100, 100), (1_000_000, 1000, 1000)] {
        let cfg = IntegralConfig::new(n, h, SupportCutoff::Fixed(q), GSpec::Mobius).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &cfg, |b, cfg| {
                b.iter(|| selberg_integral_direct_with::<f64>(black_box(cfg), exec).unwrap())
            });
        }
    }
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut group = c.benchmark_group("decomposition");
    group.sample_size(10);
    let cfg = IntegralConfig::new(2000, 10, SupportCutoff::Fixed(60), GSpec::Mobius).unwrap();
    for (name, exec) in MODES {
        let opts = DecompositionOptions {
            exec,
            ..DecompositionOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| selberg_integral_decomposed_with(black_box(&cfg), &opts).unwrap())
        });
    }
    group.finish();
}

fn prefix_vs_naive(c: &mut Criterion) {
    let mut group = c.benchmark_group("prefix_vs_naive");
    let (n, h, q) = (2000, 50, 40);
    let g = GSpec::Mobius.table::<f64>(2 * n + h).unwrap();
    let w = FejerWindow::new(h).unwrap();
    let cutoff = SupportCutoff::Fixed(q);
    group.bench_function("prefix", |b| {
        b.iter(|| selberg_integral(black_box(&g), n, w, cutoff, Execution::Sequential).unwrap())
    });
    group.bench_function("naive", |b| {
        b.iter(|| selberg_integral_naive(black_box(&g), n, w, cutoff).unwrap())
    });
    group.finish();
}

criterion_group!(benches, direct, decomposition, prefix_vs_naive);
criterion_main!(benches);
