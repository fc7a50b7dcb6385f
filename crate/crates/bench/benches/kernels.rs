use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use fpt_bench::*;
use fpt_core::arith::{hnf, smith_invariants};
use fpt_core::framing::validate;
use fpt_core::lift::lift_and_frame;
use fpt_core::morita::{decide_morita, facet_weights, polytope_iso};
use fpt_core::polytope::{enumerate_vertices, irredundant_hrep};

fn arith(c: &mut Criterion) {
    let m = int_matrix(8);
    c.bench_function("hnf 8x8", |b| b.iter(|| hnf(black_box(&m))));
    c.bench_function("smith 8x8", |b| b.iter(|| smith_invariants(black_box(&m))));
}

fn polytopes(c: &mut Criterion) {
    let h = truncated_cube();
    c.bench_function("vertices of truncated cube", |b| b.iter(|| enumerate_vertices(black_box(&h)).unwrap()));
    let v = enumerate_vertices(&h).unwrap();
    c.bench_function("facets of truncated cube", |b| b.iter(|| irredundant_hrep(black_box(&v)).unwrap()));
    let hex = hexagon();
    c.bench_function("hexagon self-isomorphism", |b| b.iter(|| polytope_iso(black_box(&hex), &hex).unwrap()));
}

fn framings(c: &mut Criterion) {
    let h = cube_h(3);
    c.bench_function("lift of the cube", |b| b.iter(|| lift_and_frame(black_box(&h)).unwrap()));
    let f = weighted_hexagon();
    c.bench_function("validate weighted hexagon", |b| b.iter(|| validate(black_box(&f))));
    c.bench_function("weights of weighted hexagon", |b| b.iter(|| facet_weights(black_box(&f)).unwrap()));
    let (s, t) = (qpq(3, 1), qpq(3, -2));
    c.bench_function("morita Q_{3,1} Q_{3,-2}", |b| b.iter(|| decide_morita(black_box(&s), &t).unwrap()));
    c.bench_function("morita hexagon with itself", |b| b.iter(|| decide_morita(black_box(&f), &f).unwrap()));
}

criterion_group!(benches, arith, polytopes, framings);
criterion_main!(benches);
