use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dismantle::analysis::{density_claim_check, DEFAULT_ENUMERATION_BUDGET};
use dismantle::experiments::{estimate_phi, CurveMethod, ExperimentConfig, Grid, Model};
use dismantle::generators::gnp;
use dismantle::{Execution, Seed};

const PATHS: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn curve(c: &mut Criterion) {
    let cfg = ExperimentConfig {
        model: Model::Binomial { c: 2.0 },
        n: 5_000,
        replicates: 16,
        seed: 1,
        method: CurveMethod::Greedy,
        grid: Grid::K(vec![1, 4, 16, 64]),
    };
    let mut group = c.benchmark_group("estimate_phi");
    group.sample_size(10);
    for (name, exec) in PATHS {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| estimate_phi(&cfg, exec).unwrap())
        });
    }
    group.finish();
}

fn density(c: &mut Criterion) {
    let g = gnp(20_000, 2.0, Seed::new(3)).unwrap();
    let mut group = c.benchmark_group("density_claim_check");
    group.sample_size(10);
    for (name, exec) in PATHS {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| density_claim_check(&g, 6, 0.5, DEFAULT_ENUMERATION_BUDGET, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, curve, density);
criterion_main!(benches);
