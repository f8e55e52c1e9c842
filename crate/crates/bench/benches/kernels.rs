use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spacelike_bench::{kernel_matrix, lattice, packet_pair};
use spacelike_core::fieldkernel::{wightman_quadrature, QuadratureOptions};
use spacelike_core::randomfield::{permanent, SpectralSampler};
use spacelike_core::special::bessel_k1;
use spacelike_core::spinbell::chsh_max_quantum;
use spacelike_core::wick::WickEngine;
use spacelike_core::{GFactor, Mass, SpacelikeInterval};

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_k1", |b| {
        b.iter(|| {
            let mut s = 0.0;
            for i in 1..100 {
                s += bessel_k1(black_box(i as f64 * 0.1)).unwrap();
            }
            s
        })
    });
}

fn wightman(c: &mut Criterion) {
    let r = SpacelikeInterval::new(2.0).unwrap();
    let m = Mass::new(1.0).unwrap();
    c.bench_function("wightman_quadrature", |b| {
        b.iter(|| wightman_quadrature(black_box(r), m, QuadratureOptions::default()).unwrap())
    });
}

fn contraction(c: &mut Criterion) {
    let mut group = c.benchmark_group("contraction");
    for sep in [1.0, 5.0, 15.0] {
        let (u, v) = packet_pair(sep);
        group.bench_with_input(BenchmarkId::from_parameter(sep), &sep, |b, _| {
            // a fresh engine each time so the cache does not answer
            b.iter(|| WickEngine::new(Mass::new(1.0).unwrap()).contraction(&u, &v).unwrap())
        });
    }
    group.finish();
}

fn permanents(c: &mut Criterion) {
    let mut group = c.benchmark_group("permanent");
    for n in [2, 4, 8] {
        let m = kernel_matrix(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| permanent(m).unwrap()));
    }
    group.finish();
}

fn chsh(c: &mut Criterion) {
    let mut group = c.benchmark_group("chsh");
    group.sample_size(10);
    group.bench_function("chsh_max_quantum", |b| b.iter(|| chsh_max_quantum(GFactor::new(0.8).unwrap())));
    group.finish();
}

fn field(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_field");
    for n in [16, 32] {
        let sampler = SpectralSampler::new(lattice(n));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            let mut seed = 0u64;
            b.iter(|| {
                seed += 1;
                sampler.sample(seed)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bessel, wightman, contraction, permanents, chsh, field);
criterion_main!(benches);
