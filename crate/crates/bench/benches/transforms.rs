use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pfs_bench::workload;
use pfs_core::periodic::{from_anf, from_fourier};
use pfs_core::{AnfPolynomial, FourierSpectrum};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transforms");
    for n in [8, 12, 16] {
        for (label, f) in workload(n) {
            group.bench_with_input(BenchmarkId::new("wht", &label), &f, |b, f| {
                b.iter(|| FourierSpectrum::wht(black_box(f)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("moebius", &label), &f, |b, f| {
                b.iter(|| AnfPolynomial::moebius(black_box(f)).unwrap())
            });
        }
    }
    group.finish();
}

fn constructions(c: &mut Criterion) {
    let mut group = c.benchmark_group("constructions");
    for n in [6, 10] {
        for (label, f) in workload(n) {
            group.bench_with_input(BenchmarkId::new("from_fourier", &label), &f, |b, f| {
                b.iter(|| from_fourier(black_box(f)).unwrap())
            });
            group.bench_with_input(BenchmarkId::new("from_anf", &label), &f, |b, f| {
                b.iter(|| from_anf(black_box(f)).unwrap())
            });
            let rep = from_anf(&f).unwrap();
            group.bench_with_input(BenchmarkId::new("verify", &label), &f, |b, f| {
                b.iter(|| rep.verify(black_box(f)).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, transforms, constructions);
criterion_main!(benches);
