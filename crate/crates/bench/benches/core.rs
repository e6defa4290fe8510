use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use randspace_bench::large_model;
use randspace_core::algebra::{
    entropy_sum_infimum, gns_construct, pauli_x, pauli_z, random_algebra_basis, random_state,
};
use randspace_core::entropy::eur_report;
use randspace_core::lattice::{classify, gallery};
use randspace_core::montecarlo::{sample_particle, SeededStream};
use randspace_core::space::exact_walk_pmf;
use randspace_core::LogBase;

fn walks(c: &mut Criterion) {
    c.bench_function("exact_walk_pmf n=200", |b| {
        b.iter(|| exact_walk_pmf(black_box(0.37), black_box(200)))
    });
}

fn eur(c: &mut Criterion) {
    let model = large_model();
    let n = model.horizon() - 1;
    c.bench_function("eur_report largest model", |b| {
        b.iter(|| eur_report(&model, black_box(n), LogBase::Two).unwrap())
    });
}

fn sampling(c: &mut Criterion) {
    let model = large_model();
    let mut g = c.benchmark_group("sampling");
    g.sample_size(10);
    g.bench_function("sample_particle 1e5", |b| {
        b.iter(|| sample_particle(&model, 4, 100_000, SeededStream::new(7, 0)).unwrap())
    });
    g.finish();
}

fn lattices(c: &mut Criterion) {
    let entries = gallery();
    c.bench_function("classify gallery", |b| {
        b.iter(|| {
            for e in &entries {
                black_box(classify(&e.lattice));
            }
        })
    });
}

fn gns(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let basis = random_algebra_basis(4, &mut rng);
    let state = random_state(4, 2, &mut rng);
    c.bench_function("gns_construct d=4", |b| {
        b.iter(|| gns_construct(&basis, &state).unwrap())
    });
}

fn infimum(c: &mut Criterion) {
    let (x, z) = (pauli_x(), pauli_z());
    let mut g = c.benchmark_group("infimum");
    g.sample_size(10);
    g.bench_function("qubit X/Z budget 1e4", |b| {
        b.iter(|| entropy_sum_infimum(&x, &z, 0.5, 0.5, LogBase::Two, 10_000, 1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, walks, eur, sampling, lattices, gns, infimum);
criterion_main!(benches);
