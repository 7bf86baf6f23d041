use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use minkval_bench::{cube, irregular};
use minkval_core::harness::config::sign_directions;
use minkval_core::valuation::volume_bounds;
use minkval_core::{Operator, Polytope, RVec, SupportBody};

fn hull(c: &mut Criterion) {
    let mut g = c.benchmark_group("hull");
    for n in [2, 3, 4] {
        let pts = irregular(n).vertices().to_vec();
        g.bench_function(format!("irregular/n{n}"), |b| b.iter(|| Polytope::hull(black_box(&pts)).unwrap()));
    }
    g.finish();
}

fn integrals(c: &mut Criterion) {
    let mut g = c.benchmark_group("integrals");
    for n in [3, 4] {
        let p = irregular(n);
        g.bench_function(format!("volume/n{n}"), |b| b.iter(|| black_box(&p).volume()));
        g.bench_function(format!("moment/n{n}"), |b| b.iter(|| black_box(&p).moment_vector()));
    }
    g.finish();
}

fn operators(c: &mut Criterion) {
    let mut g = c.benchmark_group("operators");
    let u = RVec::from_ints(&[1, 2, -1]);
    for (label, p) in [("cube", cube(3, -1, 2)), ("irregular", irregular(3))] {
        let m = SupportBody::moment_body(&p);
        g.bench_function(format!("M/{label}"), |b| b.iter(|| m.eval(black_box(&u)).unwrap()));
        let ms = Operator::MomentBodyStar.apply(&p).unwrap();
        g.bench_function(format!("Mstar/{label}"), |b| b.iter(|| ms.eval(black_box(&u)).unwrap()));
        g.bench_function(format!("Pi/{label}"), |b| {
            b.iter(|| Operator::ProjBody.apply(black_box(&p)).unwrap().value(&u).unwrap())
        });
    }
    g.finish();
}

fn bounds(c: &mut Criterion) {
    let mut g = c.benchmark_group("volume_bounds");
    g.sample_size(10);
    let body = SupportBody::moment_body(&irregular(3));
    let dirs = sign_directions(3);
    g.bench_function("M/irregular/sign-directions", |b| b.iter(|| volume_bounds(&body, black_box(&dirs)).unwrap()));
    g.finish();
}

criterion_group!(benches, hull, integrals, operators, bounds);
criterion_main!(benches);
