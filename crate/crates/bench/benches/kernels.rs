use criterion::{criterion_group, criterion_main, Criterion};
use glab_core::f2sym::{orth_f_set, span_dim, Sign};
use glab_core::honda::system::{build_p2, standardize};
use glab_core::honda::HondaParams;
use glab_core::points::f0_roots;
use glab_core::rational::intpoly::{curve_disc, IntPoly};
use glab_core::spmod::{closure, group_generators, layer_dims, GroupKind, DEFAULT_BOUND};
use std::hint::black_box;

fn spans(c: &mut Criterion) {
    c.bench_function("span_theta_minus_g4", |b| b.iter(|| span_dim(&orth_f_set(black_box(4), Sign::Minus)).unwrap()));
}

fn groups(c: &mut Criterion) {
    let s5 = group_generators(GroupKind::S5, 2, 2, 2).unwrap();
    let s6 = group_generators(GroupKind::S6, 2, 2, 3).unwrap();
    let mut g = c.benchmark_group("groups");
    g.sample_size(10);
    g.bench_function("closure_s5_mod4", |b| b.iter(|| closure(black_box(&s5), DEFAULT_BOUND).unwrap().order));
    g.bench_function("layer_dims_s6_level2", |b| b.iter(|| layer_dims(black_box(&s6), 2).unwrap()));
    g.finish();
}

fn honda(c: &mut Criterion) {
    let sys = build_p2(&HondaParams::prime_field(2, 3, [1, 0, 1, 1]).unwrap()).unwrap();
    c.bench_function("standardize_f2", |b| b.iter(|| standardize(black_box(&sys)).unwrap()));
}

fn padic(c: &mut Criterion) {
    let mut g = c.benchmark_group("padic");
    g.sample_size(10);
    g.bench_function("f0_roots_p2_24", |b| b.iter(|| f0_roots(2, black_box(24)).unwrap().roots.len()));
    g.finish();
}

fn discs(c: &mut Criterion) {
    let f = IntPoly::from_i64(&[-1, -1, 0, 0, -1, 1]).unwrap();
    c.bench_function("curve_disc_quintic", |b| b.iter(|| curve_disc(black_box(&f)).unwrap()));
}

criterion_group!(benches, spans, groups, honda, padic, discs);
criterion_main!(benches);
