use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use srange_core::{
    joint_range_terminal_density, s_density_one_sided, s_density_two_sided, trivariate_density, Barriers,
    ProcessParams, SDensityTable, ScaledValue, SeriesControl,
};

fn s_density_forms(c: &mut Criterion) {
    let sc = SeriesControl::default();
    let a = ScaledValue::new(0.37).unwrap();
    c.bench_function("s_density_one_sided/n100", |b| b.iter(|| s_density_one_sided(black_box(a), &sc)));
    c.bench_function("s_density_two_sided/n100", |b| b.iter(|| s_density_two_sided(black_box(a), &sc)));
    c.bench_function("s_density_table/4096", |b| b.iter(SDensityTable::standard));
}

fn reflection_series(c: &mut Criterion) {
    let sc = SeriesControl::default();
    let p = ProcessParams::standard(1.0).unwrap();
    let bars = Barriers::new(0.8, 1.2, 0.3).unwrap();
    c.bench_function("trivariate_density", |b| b.iter(|| trivariate_density(&p, black_box(&bars), &sc)));
    c.bench_function("joint_range_terminal_density/r=1", |b| {
        b.iter(|| joint_range_terminal_density(&p, black_box(1.0), black_box(0.3), &sc))
    });
    c.bench_function("joint_range_terminal_density/r=0.05", |b| {
        b.iter(|| joint_range_terminal_density(&p, black_box(0.05), black_box(0.01), &sc))
    });
}

criterion_group!(benches, s_density_forms, reflection_series);
criterion_main!(benches);
