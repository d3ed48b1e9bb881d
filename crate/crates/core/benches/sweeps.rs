use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gq_core::catalog::Catalog;
use gq_core::mackey::mackey_decompose_with;
use gq_core::par::Exec;
use gq_core::suite::{reconstruction_sweep, SuiteConfig};
use gq_core::twisted::OracleConfig;

fn label(exec: Exec) -> &'static str {
    match exec {
        Exec::Sequential => "sequential",
        Exec::Parallel => "parallel",
    }
}

fn decompositions(c: &mut Criterion) {
    let cat = Catalog::builtin();
    let cfg = OracleConfig::default();
    let mut group = c.benchmark_group("mackey_decompose");
    for (name, normal) in [("c6xc6", vec![6]), ("c4xc4", vec![4]), ("s4", vec![])] {
        let g = cat.group(name).unwrap();
        let alpha = cat.cocycles_on(name).pop().unwrap().1;
        let n = g.generate(&normal);
        for &exec in Exec::available() {
            group.bench_with_input(BenchmarkId::new(label(exec), name), &exec, |b, &exec| {
                b.iter(|| mackey_decompose_with(exec, g, &alpha, &n, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let cat = Catalog::builtin();
    let mut group = c.benchmark_group("reconstruction_sweep");
    group.sample_size(10);
    for &exec in Exec::available() {
        let cfg = SuiteConfig {
            exec,
            max_order: 16,
            ..SuiteConfig::default()
        };
        group.bench_function(label(exec), |b| {
            b.iter(|| reconstruction_sweep(&cat, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, decompositions, sweep);
criterion_main!(benches);
