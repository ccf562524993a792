use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use eigenbound::harness::{run_inclusion_with, EnsembleConfig, Execution, RunOptions};
use eigenbound::{oracle, HolderPair, NormKind};

fn grid() -> Vec<HolderPair> {
    [2.0, 4.0, 16.0].iter().map(|&p| HolderPair::new(p).unwrap()).collect()
}

fn bench_inclusion(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_inclusion");
    group.sample_size(10);
    for samples in [64, 256] {
        let cfg = EnsembleConfig { samples, ..EnsembleConfig::default() };
        for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let opts = RunOptions { execution, ..RunOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, samples), &cfg, |b, cfg| {
                b.iter(|| run_inclusion_with(black_box(cfg), &NormKind::ALL, &grid(), &opts).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_eigenvalues");
    for (n, m) in [(2, 2), (4, 5), (8, 6)] {
        let cfg = EnsembleConfig { samples: 1, n_range: (n, n), m_range: (m, m), ..EnsembleConfig::default() };
        let p = eigenbound::harness::generate(&cfg).unwrap().sample(0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("n{n}_m{m}")), &p, |b, p| {
            b.iter(|| oracle::eigenvalues(black_box(p)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_inclusion, bench_oracle);
criterion_main!(benches);
