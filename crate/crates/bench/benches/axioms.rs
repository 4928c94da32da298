use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use evspace::evs::{check_axioms, check_properties, default_scalars, seeded_sample, Evs, Sampler};
use evspace::instances::{ConeSpace, HyperSpace};
use evspace::metric::MetricSpace;
use evspace::norm::NormSpace;

fn run<I: Evs + Sampler>(c: &mut Criterion, name: &str, inst: &I) {
    let scalars = default_scalars();
    let mut group = c.benchmark_group(format!("axioms/{name}"));
    group.sample_size(10);
    for n in [10, 20] {
        let sample = seeded_sample(inst, 0, n);
        group.bench_with_input(BenchmarkId::new("axioms", n), &sample, |b, s| {
            b.iter(|| check_axioms(inst, s, &scalars, 0).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("properties", n), &sample, |b, s| {
            b.iter(|| check_properties(inst, s, &scalars).unwrap())
        });
    }
    group.finish();
}

fn instances(c: &mut Criterion) {
    run(c, "metric", &MetricSpace::indexed(4));
    run(c, "norm", &NormSpace::finite(12).unwrap());
    run(c, "cone", &ConeSpace { dim: 2 });
    run(c, "hyperspace", &HyperSpace { dim: 2 });
}

criterion_group!(benches, instances);
criterion_main!(benches);
