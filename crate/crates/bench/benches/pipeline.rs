use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use monosum_bench::{balanced, problem, EULER, NONLINEAR};
use monosum_core::borel::formal_borel;
use monosum_core::pde::formal_solve;
use monosum_core::summation::{monomial_borel_sum, robust_pade, SumOptions};
use monosum_core::ExactComplex;
use num_complex::Complex64;

fn solve(c: &mut Criterion) {
    let numeric = problem::<Complex64>(EULER);
    let exact = problem::<ExactComplex>(EULER);
    let nonlinear = problem::<Complex64>(NONLINEAR);
    c.bench_function("formal_solve euler T=40", |b| b.iter(|| formal_solve(black_box(&numeric), 40).unwrap()));
    c.bench_function("formal_solve euler exact T=40", |b| b.iter(|| formal_solve(black_box(&exact), 40).unwrap()));
    c.bench_function("formal_solve nonlinear T=40", |b| b.iter(|| formal_solve(black_box(&nonlinear), 40).unwrap()));
}

fn transforms(c: &mut Criterion) {
    let y = formal_solve(&problem::<Complex64>(NONLINEAR), 60).unwrap().series;
    let mo = balanced();
    c.bench_function("formal_borel nonlinear T=60", |b| b.iter(|| formal_borel(black_box(&y), &mo).unwrap()));
    let coeffs: Vec<Complex64> = (0..40).map(|n| Complex64::new((-1f64).powi(n) / (n + 1) as f64, 0.0)).collect();
    c.bench_function("robust_pade [20/19]", |b| b.iter(|| robust_pade(black_box(&coeffs), 20, 19).unwrap()));
}

fn sum(c: &mut Criterion) {
    let mo = balanced();
    let opts = SumOptions::default();
    let euler = formal_solve(&problem::<Complex64>(EULER), 80).unwrap().series;
    let x = [Complex64::new(1.0, 0.0), Complex64::new(-0.1, 0.0)];
    c.bench_function("borel sum euler T=80", |b| {
        b.iter(|| monomial_borel_sum(black_box(&euler), &mo, &x, PI, &opts).unwrap())
    });
    let nonlinear = formal_solve(&problem::<Complex64>(NONLINEAR), 60).unwrap().series;
    let x = [Complex64::new(0.1, 0.0), Complex64::new(-1.0, 0.0)];
    c.bench_function("borel sum nonlinear T=60", |b| {
        b.iter(|| monomial_borel_sum(black_box(&nonlinear), &mo, &x, PI, &opts).unwrap())
    });
}

criterion_group!(benches, solve, transforms, sum);
criterion_main!(benches);
