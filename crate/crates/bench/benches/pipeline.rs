use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use lkhom_core::diagram::{canonicalize, Diagram};
use lkhom_core::enumerate::enum_forests;
use lkhom_core::linkio::{fuzz_linking_matrix, samples};
use lkhom_core::spaces::{dim_space, verify_main_theorem, Budget, Space};

fn canonical_forms(c: &mut Criterion) {
    let forests: Vec<Diagram> = enum_forests(5, 3).iter().map(|k| Diagram::from_key(k).unwrap()).collect();
    c.bench_function("canonicalize/forests(5,3)", |b| {
        b.iter(|| {
            for f in &forests {
                black_box(canonicalize(f).unwrap());
            }
        })
    });
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enum_forests");
    for (k, d) in [(4u8, 3usize), (5, 3), (4, 4)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{k},{d}")), &(k, d), |b, &(k, d)| {
            b.iter(|| enum_forests(k, d))
        });
    }
    g.finish();
}

fn dimensions(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("dim");
    g.sample_size(10);
    for (space, k, d) in [
        (Space::Bhl, 4u8, 3usize),
        (Space::Bhl, 5, 3),
        (Space::Bhsl, 4, 3),
        (Space::Ahl, 3, 2),
        (Space::Chord, 0, 4),
    ] {
        g.bench_function(format!("{}({k})_{d}", space.name()), |b| {
            b.iter(|| dim_space(space, k, d, &budget).unwrap().dimension)
        });
    }
    g.finish();
}

fn certificates(c: &mut Criterion) {
    let budget = Budget::default();
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    g.bench_function("main(5,3)", |b| b.iter(|| verify_main_theorem(5, 3, &budget).unwrap().len()));
    g.finish();
}

fn fuzzing(c: &mut Criterion) {
    let w = samples::whitehead();
    c.bench_function("fuzz/whitehead x1000", |b| b.iter(|| fuzz_linking_matrix(&w, 1000, 1).unwrap().invariant));
}

criterion_group!(benches, canonical_forms, enumeration, dimensions, certificates, fuzzing);
criterion_main!(benches);
