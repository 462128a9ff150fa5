use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pfs_bench::{small_tables, workload};
use pfs_core::approx::theorem3_for_rep;
use pfs_core::depth2::{build_for_function, verify_depth2};
use pfs_core::make_family;
use pfs_core::nmqc::{optimize_bias, OptimizerConfig, XorGame};
use pfs_core::periodic::{brute_force_pfs, c3_recipe, OracleConfig};

fn oracle(c: &mut Criterion) {
    let config = OracleConfig::default();
    let tables = small_tables();
    c.bench_function("oracle/n=3 tables", |b| {
        b.iter(|| {
            for f in &tables {
                black_box(brute_force_pfs(f, &config).unwrap());
            }
        })
    });
}

fn depth2(c: &mut Criterion) {
    let mut group = c.benchmark_group("depth2");
    for n in [4, 8, 10] {
        for (label, f) in workload(n) {
            group.bench_with_input(BenchmarkId::new("build+verify", &label), &f, |b, f| {
                b.iter(|| {
                    let p = build_for_function(black_box(f)).unwrap();
                    verify_depth2(&p, f).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn optimizer(c: &mut Criterion) {
    let config = OptimizerConfig::default();
    let mut group = c.benchmark_group("optimize_bias");
    for n in [2, 3, 5] {
        let game = XorGame::from_function(&make_family("cq", &[n]).unwrap()).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("cq:{n}")),
            &game,
            |b, g| b.iter(|| optimize_bias(black_box(g), &config)),
        );
    }
    group.finish();
}

fn probabilistic(c: &mut Criterion) {
    let mut group = c.benchmark_group("probabilistic_polynomial");
    for n in [4, 6, 8] {
        let rep = c3_recipe(n).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("c3:{n}")),
            &rep,
            |b, r| b.iter(|| theorem3_for_rep(black_box(r)).unwrap()),
        );
    }
    group.finish();
}

criterion_group!(benches, oracle, depth2, optimizer, probabilistic);
criterion_main!(benches);
