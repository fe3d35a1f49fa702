use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use gammapres_core::cohom::h2_dim;
use gammapres_core::flmod::meataxe::simple_modules;
use gammapres_core::group::catalog::{abelian_with_inversion, dihedral, symmetric};
use gammapres_core::randmodel::{exhaustive_generation_probability, sample_quotients};
use gammapres_core::{ElemSet, FpModule, Limits};

fn cohomology(c: &mut Criterion) {
    let l = Limits::default();
    let g = dihedral(8);
    let a = FpModule::trivial(&g, 2, 1);
    c.bench_function("h2_dim D8 over F2", |b| b.iter(|| h2_dim(black_box(&a), &l).unwrap()));
}

fn modules(c: &mut Criterion) {
    let l = Limits::default();
    let g = symmetric(4);
    c.bench_function("simple_modules S4 over F3", |b| b.iter(|| simple_modules(black_box(&g), 3, &l).unwrap()));
}

fn sampling(c: &mut Criterion) {
    let l = Limits::default();
    let f = abelian_with_inversion(&[3, 3]);
    c.bench_function("sample_quotients 1000 draws", |b| {
        b.iter(|| sample_quotients(black_box(&f), 3, 1000, 7, &l).unwrap())
    });
    let r = ElemSet::full(f.order());
    c.bench_function("exhaustive_generation_probability", |b| {
        b.iter(|| exhaustive_generation_probability(black_box(&f), &r, 3, &l).unwrap())
    });
}

criterion_group!(kernels, cohomology, modules, sampling);
criterion_main!(kernels);
