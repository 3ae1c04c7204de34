use std::hint::black_box;

use bjnear::distance::dist_to_scalars;
use bjnear::ortho::check_orthogonality;
use bjnear::{sample, AlgebraSpec, ComplexMatrix, Exec, Field, SubspaceBasis, ToleranceConfig};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn batch(count: usize, n: usize) -> Vec<ComplexMatrix> {
    let mut rng = sample::rng(11);
    (0..count)
        .map(|_| sample::gaussian(n, n, &mut rng))
        .collect()
}

fn scalar_distances(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let inputs = batch(16, 4);
    let mut group = c.benchmark_group("dist_to_scalars_batch");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &inputs,
            |b, inputs| {
                b.iter(|| {
                    exec.map_slice(inputs, |a| {
                        dist_to_scalars(black_box(a), &cfg).unwrap().dist
                    })
                })
            },
        );
    }
    group.finish();
}

fn orthogonality_checks(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let inputs = batch(32, 4);
    let w = SubspaceBasis::diagonal(4, Field::Complex);
    let mut group = c.benchmark_group("check_orthogonality_batch");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &inputs,
            |b, inputs| {
                b.iter(|| {
                    exec.map_slice(inputs, |a| {
                        check_orthogonality(black_box(a), &w, &cfg)
                            .unwrap()
                            .is_orthogonal()
                    })
                })
            },
        );
    }
    group.finish();
}

fn algebra_distances(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let inputs = batch(8, 4);
    let alg = AlgebraSpec::blocks(&[2, 1, 1]).unwrap();
    let mut group = c.benchmark_group("dist_to_algebra_batch");
    group.sample_size(10);
    for exec in [Exec::Sequential, Exec::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &inputs,
            |b, inputs| {
                b.iter(|| {
                    exec.map_slice(inputs, |a| {
                        bjnear::distance::dist_to_algebra(black_box(a), &alg, &cfg)
                            .unwrap()
                            .gap
                    })
                })
            },
        );
    }
    group.finish();
}

criterion_group!(
    benches,
    scalar_distances,
    orthogonality_checks,
    algebra_distances
);
criterion_main!(benches);
