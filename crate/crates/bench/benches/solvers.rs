use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weylkit::fourier::{amplitude_from_weyl, constant_potential_weyl, AmplitudeOptions};
use weylkit::interpolation::{partial_sums, SeriesMode};
use weylkit::linalg::{c64, identity, CMat, I};
use weylkit::structured::{build_structured_operator, canonical_from_kernel, factorize_triangular};
use weylkit::{AmplitudeMode, GbdtSystem, WeylSampler};
use weylkit_bench::{gaussian_kernel, pair_params, resonant_params};

fn gbdt(c: &mut Criterion) {
    let xs: Vec<f64> = (0..64).map(|k| k as f64 / 32.0).collect();
    let resonant = GbdtSystem::new(resonant_params()).unwrap();
    c.bench_function("gbdt/hamiltonian_path_64/resonant", |b| {
        b.iter(|| resonant.hamiltonian_path(black_box(&xs)).unwrap())
    });
    let sys = GbdtSystem::new(pair_params()).unwrap();
    c.bench_function("gbdt/hamiltonian_path_64/closed_form", |b| b.iter(|| sys.hamiltonian_path(black_box(&xs)).unwrap()));
    let pair = sys.weyl_pair();
    c.bench_function("gbdt/weyl_function", |b| b.iter(|| pair.phi(black_box(c64(0.3, 1.2))).unwrap()));
}

fn structured(c: &mut Criterion) {
    let mut group = c.benchmark_group("structured/factorize");
    group.sample_size(10);
    for m in [64usize, 128, 256] {
        let h = 1.0 / m as f64;
        let k = gaussian_kernel(h, m);
        let op = build_structured_operator(&k, 1.0, None).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &op, |b, op| b.iter(|| factorize_triangular(op).unwrap()));
    }
    group.finish();
    let k = gaussian_kernel(1.0 / 128.0, 256);
    c.bench_function("structured/canonical_128", |b| b.iter(|| canonical_from_kernel(&k, &[-1.0, -2.0], 1.0).unwrap()));
}

fn fourier(c: &mut Criterion) {
    let phi = WeylSampler::from_fn(1, |z| Ok(CMat::from_element(1, 1, constant_potential_weyl(c64(0.5, 0.0), z))));
    let mut opts = AmplitudeOptions::new(AmplitudeMode::Dirac, 1.0 / 128.0, 1.0 / 256.0, 128);
    opts.a = 50.0;
    opts.richardson = false;
    let mut group = c.benchmark_group("fourier");
    group.sample_size(10);
    group.bench_function("amplitude_from_weyl", |b| b.iter(|| amplitude_from_weyl(&phi, &opts).unwrap()));
    group.finish();
}

fn interpolation(c: &mut Criterion) {
    let samples = vec![identity(2) * I; 61];
    let mut group = c.benchmark_group("interpolation");
    group.sample_size(10);
    for n in [20usize, 40, 60] {
        group.bench_with_input(BenchmarkId::new("partial_sums", n), &n, |b, &n| {
            b.iter(|| partial_sums(&samples, c64(0.0, 3.0), n, 0.1, SeriesMode::WeylDirac).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, gbdt, structured, fourier, interpolation);
criterion_main!(benches);
