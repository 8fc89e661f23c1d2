use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use crtypes_core::coeff::default_coeff_set;
use crtypes_core::fixtures;
use crtypes_core::invariants::{self, generators};
use crtypes_core::psh::{sampled_psh, Grid};
use crtypes_core::tangency::solution_space;
use crtypes_core::parse_poly;

fn poly(c: &mut Criterion) {
    let p = parse_poly("(z1 + conj(z2) + 1/2*z1*conj(z1) - i*w)^4", 2).unwrap();
    let q = parse_poly("(z2 - conj(z1) + conj(w))^3", 2).unwrap();
    c.bench_function("poly_mul", |b| b.iter(|| black_box(&p) * black_box(&q)));
    let src = p.to_string();
    c.bench_function("parse_poly", |b| b.iter(|| parse_poly(black_box(&src), 2).unwrap()));
}

fn fields(c: &mut Criterion) {
    let ex = fixtures::squared_quadric();
    let m = ex.hypersurface();
    let frame = ex.frame().unwrap();
    let g = generators(&m, &frame, 8);
    c.bench_function("lie_bracket", |b| b.iter(|| g[0].lie_bracket(black_box(&g[1]))));
    c.bench_function("commutator_type_squared_quadric", |b| {
        b.iter(|| invariants::commutator_type(&m, &frame, 6).unwrap())
    });
    c.bench_function("levi_type_squared_quadric", |b| b.iter(|| invariants::levi_type(&m, &frame, 6).unwrap()));
    let coeffs = default_coeff_set();
    c.bench_function("contact_search_squared_quadric", |b| {
        b.iter(|| invariants::contact_search(&m, 1, 2, &coeffs).unwrap())
    });
}

fn psh_tangency(c: &mut Criterion) {
    let f = parse_poly("1/2*z1*conj(z2) + 1/2*conj(z1)*z2 + 1/2*(z1*conj(z1))^2", 2).unwrap();
    let grid = Grid::default();
    c.bench_function("sampled_psh", |b| b.iter(|| sampled_psh(black_box(&f), &grid).unwrap()));
    let t = fixtures::tangency_family(2).problem();
    c.bench_function("solution_space_k4_m8", |b| b.iter(|| solution_space(black_box(&t))));
}

criterion_group!(benches, poly, fields, psh_tangency);
criterion_main!(benches);
