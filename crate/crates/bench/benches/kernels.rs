use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use treespectrum::{continuant_pair, factorize, reconstruct_word, run_spectrum, SpectrumOptions};
use treespectrum_bench::{seeded_word, simple_cofactor};

fn determinant(c: &mut Criterion) {
    let mut group = c.benchmark_group("cofactor_det");
    for m in [3, 4, 6, 8] {
        let cofactor = simple_cofactor(m, 3);
        group.bench_with_input(
            BenchmarkId::from_parameter(cofactor.rows()),
            &cofactor,
            |b, a| b.iter(|| black_box(a).det().unwrap()),
        );
    }
    group.finish();
}

fn reconstruction(c: &mut Criterion) {
    let mut group = c.benchmark_group("reconstruct");
    for len in [10, 100, 1000] {
        let pair = continuant_pair(&seeded_word(7, len, 1_000_000));
        group.bench_with_input(BenchmarkId::from_parameter(len), &pair, |b, p| {
            b.iter(|| reconstruct_word(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorize");
    for len in [6, 10, 14] {
        let d = continuant_pair(&seeded_word(11, len, 40)).product();
        group.bench_with_input(BenchmarkId::from_parameter(d.bits()), &d, |b, n| {
            b.iter(|| factorize(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("m4_q3", |b| {
        b.iter(|| run_spectrum(4, 3, &SpectrumOptions::default()).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    determinant,
    reconstruction,
    factorization,
    spectrum
);
criterion_main!(benches);
