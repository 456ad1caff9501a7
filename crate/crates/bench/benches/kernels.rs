use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quadsum_core::backend::{Exact, Float};
use quadsum_core::gauss::{gauss_s, quad_gauss_g, reciprocity_residual, GaussSumSpec};
use quadsum_core::lattice::{reduced_form, RatSymMatrix};
use quadsum_core::multidim::{random_problem, reciprocity_nd_residual};
use quadsum_core::number::PrecComplex;
use quadsum_core::selftest::random_siegel_point;
use quadsum_core::theta::riemann_theta;
use quadsum_core::zeta::{zeros_in_window, FiniteZeta};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u32 = 128;

fn gauss(c: &mut Criterion) {
    let fl = Float::new(P);
    let ex = Exact::new(P);
    let spec = GaussSumSpec::new(37, 11, 97).unwrap();
    c.bench_function("gauss_s float 37,11,97", |b| b.iter(|| gauss_s(&fl, black_box(&spec))));
    c.bench_function("gauss_s exact 37,11,97", |b| b.iter(|| gauss_s(&ex, black_box(&spec))));
    c.bench_function("quad_gauss_g closed n=199", |b| b.iter(|| quad_gauss_g(&fl, black_box(5), 199, true).unwrap()));
    c.bench_function("reciprocity residual float", |b| b.iter(|| reciprocity_residual(&fl, black_box(-23), 5, 41).unwrap()));
}

fn zeta(c: &mut Criterion) {
    let z = FiniteZeta::new(360, P).unwrap();
    let s = PrecComplex::from_f64(0.5, 14.1, P);
    c.bench_function("Z_360 at 1/2 + 14.1i", |b| b.iter(|| z.eval(black_box(&s))));
    c.bench_function("zeros of Z_12 in [0, 50]", |b| b.iter(|| zeros_in_window(12, 0.0, 50.0, P).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let t = RatSymMatrix::from_i64_fracs(&[
        vec![(1, 2), (1, 3), (-2, 7)],
        vec![(1, 3), (5, 4), (1, 6)],
        vec![(-2, 7), (1, 6), (3, 5)],
    ])
    .unwrap();
    c.bench_function("reduced form 3x3", |b| b.iter(|| reduced_form(black_box(t.as_matrix())).unwrap()));
}

fn multidim(c: &mut Criterion) {
    let p = random_problem(&mut ChaCha8Rng::seed_from_u64(7), 2);
    let ex = Exact::new(P);
    c.bench_function("nd reciprocity exact n=2", |b| b.iter(|| reciprocity_nd_residual(&ex, black_box(&p)).unwrap()));
}

fn theta(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p2 = random_siegel_point(&mut rng, 2, P).unwrap();
    let p3 = random_siegel_point(&mut rng, 3, P).unwrap();
    c.bench_function("riemann theta n=2 tol 1e-25", |b| b.iter(|| riemann_theta(black_box(&p2), 1e-25).unwrap()));
    c.bench_function("riemann theta n=3 tol 1e-25", |b| b.iter(|| riemann_theta(black_box(&p3), 1e-25).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = gauss, zeta, lattice, multidim, theta
}
criterion_main!(benches);
