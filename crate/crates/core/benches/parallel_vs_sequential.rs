use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use strength_core::catalog::builtin_system;
use strength_core::dimpoly::{dimension_polynomial_with, free_term_counts, StaircaseSet};
use strength_core::groebner::{buchberger, BuchbergerOptions};
use strength_core::par::Exec;
use strength_core::pipeline::{counting_ring, CountingRing};
use strength_core::scheme::{discretize, SchemeSpec};

fn ring(name: &str, preset: &str) -> CountingRing {
    let p = builtin_system(name).unwrap();
    let d = discretize(&p, &SchemeSpec::preset(preset, p.operator_count()).unwrap()).unwrap();
    counting_ring(&d, None).unwrap()
}

fn staircase(r: &CountingRing) -> StaircaseSet {
    let g = buchberger(&r.relations, &r.order, &BuchbergerOptions::default());
    StaircaseSet::from_basis(&g, r.generator_names.len())
}

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn oracle(c: &mut Criterion) {
    let s = staircase(&ring("maxwell", "forward"));
    let mut group = c.benchmark_group("oracle_counts_maxwell_forward_r12");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| free_term_counts(black_box(&s), 12, exec))
        });
    }
    group.finish();
}

fn inclusion_exclusion(c: &mut Criterion) {
    let s = staircase(&ring("potential", "forward"));
    let mut group = c.benchmark_group("inclusion_exclusion_potential_forward");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dimension_polynomial_with(black_box(&s), exec).unwrap())
        });
    }
    group.finish();
}

fn completion(c: &mut Criterion) {
    let r = ring("maxwell", "forward");
    let mut group = c.benchmark_group("buchberger_maxwell_forward");
    group.sample_size(10);
    for (name, parallel) in [("sequential", false), ("parallel", true)] {
        let options = BuchbergerOptions { parallel, ..Default::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| buchberger(black_box(&r.relations), &r.order, &options))
        });
    }
    group.finish();
}

criterion_group!(benches, oracle, inclusion_exclusion, completion);
criterion_main!(benches);
