use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use evspace::metric::{
    builtin_lazy, classify_pair, comparing_function_metric, indexed_labels, partial_comparing_function, random_metric,
    transform_bounded, BuiltinParams,
};
use evspace::norm::{independence_witness, NormFamilyParams};
use evspace::q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn finite_metrics(c: &mut Criterion) {
    let mut group = c.benchmark_group("comparing/finite");
    for n in [8, 16, 32] {
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let d = random_metric(&mut rng, indexed_labels(n));
        let rho = transform_bounded(&d).unwrap();
        group.bench_with_input(BenchmarkId::new("c_d", n), &n, |b, _| {
            b.iter(|| comparing_function_metric(black_box(&d), black_box(&rho)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("classify", n), &n, |b, _| {
            b.iter(|| classify_pair(black_box(&d), black_box(&rho)).unwrap())
        });
    }
    group.finish();
}

fn lazy_metrics(c: &mut Criterion) {
    let params = BuiltinParams::default();
    let discrete = builtin_lazy("discrete", &params).unwrap();
    let shrinking = builtin_lazy("shrinking", &params).unwrap();
    let mut group = c.benchmark_group("comparing/lazy");
    for depth in [10, 25, 50] {
        group.bench_with_input(BenchmarkId::new("partial", depth), &depth, |b, &depth| {
            b.iter(|| partial_comparing_function(&discrete, &shrinking, black_box(&[depth])).unwrap())
        });
    }
    group.finish();
}

fn norm_witness(c: &mut Criterion) {
    let p = NormFamilyParams::new(12, ["h0"], q(2, 1)).unwrap();
    let r = NormFamilyParams::new(12, ["h2"], q(3, 1)).unwrap();
    let mut group = c.benchmark_group("comparing/witness");
    for k in [3u32, 6, 12] {
        let eps = q(1, 10i64.pow(k));
        group.bench_with_input(BenchmarkId::new("eps_1e-", k), &eps, |b, eps| {
            b.iter(|| independence_witness(black_box(&p), black_box(&r), eps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, finite_metrics, lazy_metrics, norm_witness);
criterion_main!(benches);
