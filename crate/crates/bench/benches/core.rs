use criterion::{criterion_group, criterion_main, Criterion};
use isopower::arith::point_count;
use isopower::decide::{decide_equivalence, maximal_scan, ScanOptions};
use isopower::kernels::{commutant, kernel_subgroups};
use isopower::modules::{enumerate_modules, normal_form};
use isopower::orders::{class_group, QuadOrder};
use isopower::Bounds;
use isopower_bench::{curve, curve_data};
use std::hint::black_box;

fn arith(c: &mut Criterion) {
    let e = curve(101, 1, [0, 0, 0, 3, 7]);
    let b = Bounds::default();
    c.bench_function("point_count F101^2", |bch| bch.iter(|| point_count(black_box(&e), 2, &b).unwrap()));
}

fn orders(c: &mut Criterion) {
    let b = Bounds::default();
    c.bench_function("class_group -9971", |bch| {
        bch.iter(|| class_group(&QuadOrder::from_disc(black_box(-9971)).unwrap(), &b).unwrap())
    });
}

fn modules(c: &mut Criterion) {
    let b = Bounds::default();
    let o = QuadOrder::from_disc(-84).unwrap();
    c.bench_function("enumerate_modules -84 rank 2", |bch| bch.iter(|| enumerate_modules(black_box(&o), 2, &b).unwrap()));
    let nfs = enumerate_modules(&o, 2, &b).unwrap();
    let m = nfs.last().unwrap().to_module(&o).unwrap();
    c.bench_function("normal_form -84 rank 2", |bch| bch.iter(|| normal_form(black_box(&m)).unwrap()));
}

fn kernels(c: &mut Criterion) {
    let d = curve_data(31, 1, [0, 0, 0, 1, 3]);
    let com = commutant(&d, 3, 1).unwrap();
    let b = Bounds::default();
    c.bench_function("kernel_subgroups l=3 r=2", |bch| bch.iter(|| kernel_subgroups(black_box(&com), 2, &b).unwrap()));
}

fn decide(c: &mut Criterion) {
    c.bench_function("decide_equivalence F13", |bch| {
        bch.iter(|| decide_equivalence(&curve_data(13, 1, black_box([0, 0, 0, 1, 1]))).unwrap())
    });
    let opts = ScanOptions { minimal: false, max_g: 2, sample: Some(50), seed: 1 };
    let b = Bounds::default();
    c.bench_function("maximal_scan p=3 sample 50", |bch| bch.iter(|| maximal_scan(3, black_box(&opts), &b).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = arith, orders, modules, kernels, decide
}
criterion_main!(benches);
