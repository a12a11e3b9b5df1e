use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ejnet::ej::EjInt;
use ejnet::residue::Modulus;

fn reduce(c: &mut Criterion) {
    let small = Modulus::new(3, 4).unwrap();
    let large = Modulus::new(20_000, 30_001).unwrap();
    let z = EjInt::new(123_456_789, -987_654_321);
    c.bench_function("reduce_3_4", |b| b.iter(|| small.reduce(black_box(z))));
    c.bench_function("reduce_large_modulus", |b| {
        b.iter(|| large.reduce(black_box(z)))
    });
}

fn multiply(c: &mut Criterion) {
    let p = EjInt::new(31_337, -4_242);
    let q = EjInt::new(-777, 1_001);
    c.bench_function("ej_mul", |b| b.iter(|| black_box(p) * black_box(q)));
}

fn residues(c: &mut Criterion) {
    let m = Modulus::new(30, 31).unwrap();
    c.bench_function("enumerate_residues_30_31", |b| b.iter(|| m.residues()));
}

criterion_group!(benches, reduce, multiply, residues);
criterion_main!(benches);
