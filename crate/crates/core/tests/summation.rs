use std::f64::consts::PI;

use monosum_core::borel::{convolve, formal_borel, formal_laplace};
use monosum_core::monomial::{approximate, gevrey_fit};
use monosum_core::pde::{formal_solve, PdeProblem};
use monosum_core::summation::{
    laplace_quadrature, monomial_borel_sum, norm_exponents, norm_mu, ray_restrict, RayContinuation, SumOptions,
};
use monosum_core::{BorelSeries, MonomialOrder, MultiIndex, TruncatedSeries, Q};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EULER: &str = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
    "G":{"terms":[{"x":[0],"eps":[0],"y":[1],"coef":[[1,0]]},{"x":[1],"eps":[0],"y":[0],"coef":[[-1,0]]}]}}"#;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ln_factorial(n: u32) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn laplace_raises_gevrey_order_by_one_over_k() {
    for (k, s) in [(Q::from_integer(1), 0.0), (Q::from_integer(1), 1.0), (Q::from_integer(2), 0.5), (Q::new(1, 2), 0.0)] {
        let mo = MonomialOrder::new(vec![1], k, vec![Q::from_integer(1)]).unwrap();
        let body = TruncatedSeries::scalar(1, 40, (1..=40).map(|n| (vec![n], c((s * ln_factorial(n)).exp() * 0.7f64.powi(n as i32)))));
        let g = BorelSeries::new(body, mo).unwrap();
        let f = formal_laplace(&g).unwrap();
        let fit = gevrey_fit(&f, &MultiIndex(vec![1])).unwrap();
        let want = s + 1.0 / monosum_core::scalar::q_to_f64(k);
        assert!((fit.s_hat - want).abs() < 0.15, "k = {k}, s = {s}: got {}", fit.s_hat);
    }
}

#[test]
fn convolution_is_product_after_laplace() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for mo in [
        MonomialOrder::new(vec![1], Q::from_integer(1), vec![Q::from_integer(1)]).unwrap(),
        MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).unwrap(),
        MonomialOrder::new(vec![1, 2], Q::from_integer(1), vec![Q::new(1, 3), Q::new(2, 3)]).unwrap(),
    ] {
        let d = mo.dim();
        let mut f = TruncatedSeries::new(d, 1, 12);
        for _ in 0..5 {
            let beta: Vec<u32> = (0..d).map(|j| mo.alpha().0[j] + rng.gen_range(0..3)).collect();
            f.add_term(MultiIndex(beta), vec![Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))]);
        }
        let phi = formal_borel(&f, &mo).unwrap();
        let phi2 = convolve(&phi, &phi).unwrap();
        let x: Vec<Complex64> = (0..d).map(|j| Complex64::from_polar(0.6, 0.3 * j as f64 - 0.2)).collect();
        let laplace = |g: &BorelSeries<Complex64>| {
            let cont = RayContinuation::polynomial(&ray_restrict(g, &x).unwrap());
            laplace_quadrature(&cont, &mo, &x, 0.0, 1e-12).unwrap().value[0]
        };
        let single = laplace(&phi);
        assert!((single - f.evaluate(&x)[0]).norm() < 1e-10);
        assert!((laplace(&phi2) - single * single).norm() < 1e-9, "order {mo:?}");
    }
}

#[test]
fn remainder_follows_gevrey_bound() {
    let y = formal_solve(&PdeProblem::<Complex64>::from_json(EULER).unwrap(), 60).unwrap().series;
    let mo = MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).unwrap();
    let x = [c(1.0), c(-0.05)];
    let sum = monomial_borel_sum(&y, &mo, &x, PI, &SumOptions { tol: 1e-13, degree: None }).unwrap().value[0];
    let monomial = (x[0] * x[1]).norm();
    let pts: Vec<(f64, f64)> = (1..=8u32)
        .map(|n| {
            let app = approximate(&y, &MultiIndex(vec![n, n])).unwrap().evaluate(&x)[0];
            (ln_factorial(n) + n as f64 * monomial.ln(), (sum - app).norm().ln())
        })
        .collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 8.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 8.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 1.0).abs() < 0.2, "slope {slope}");
}

fn random_borel(rng: &mut ChaCha8Rng, mo: &MonomialOrder) -> BorelSeries<Complex64> {
    let d = mo.dim();
    let mut f = TruncatedSeries::new(d, 1, 10);
    for _ in 0..rng.gen_range(1..5) {
        let beta: Vec<u32> = (0..d).map(|j| mo.alpha().0[j] + rng.gen_range(0..4)).collect();
        f.add_term(MultiIndex(beta), vec![Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))]);
    }
    formal_borel(&f, mo).unwrap()
}

fn grid(d: usize) -> Vec<Vec<Complex64>> {
    let mut pts = vec![];
    for i in 0..=120 {
        let r = 4.0 * i as f64 / 120.0;
        for a in 0..6 {
            pts.push((0..d).map(|j| Complex64::from_polar(r, 0.7 * a as f64 + 0.4 * j as f64)).collect());
        }
    }
    pts
}

#[test]
fn convolution_is_submultiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for mo in [
        MonomialOrder::new(vec![1], Q::from_integer(1), vec![Q::from_integer(1)]).unwrap(),
        MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).unwrap(),
    ] {
        let w = norm_exponents(&mo);
        let pts = grid(mo.dim());
        for _ in 0..20 {
            let (f, g) = (random_borel(&mut rng, &mo), random_borel(&mut rng, &mo));
            let fg = convolve(&f, &g).unwrap();
            let samples = |h: &BorelSeries<Complex64>| -> Vec<(Vec<Complex64>, Vec<Complex64>)> {
                pts.iter().map(|p| (p.clone(), h.evaluate(p))).collect()
            };
            let (sf, sg, sfg) = (samples(&f), samples(&g), samples(&fg));
            for mu in [8.0, 16.0, 32.0] {
                let lhs = norm_mu(&sfg, &w, mu).unwrap();
                let rhs = norm_mu(&sf, &w, mu).unwrap() * norm_mu(&sg, &w, mu).unwrap();
                assert!(lhs <= rhs * (1.0 + 1e-12), "μ = {mu}: {lhs} > {rhs}");
            }
        }
    }
}

#[test]
fn norms_focus_as_mu_grows() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mo = MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).unwrap();
    let w = norm_exponents(&mo);
    let pts = grid(2);
    for _ in 0..10 {
        let f = random_borel(&mut rng, &mo);
        let samples: Vec<_> = pts.iter().map(|p| (p.clone(), f.evaluate(p))).collect();
        let norms: Vec<f64> = [1.0, 4.0, 16.0, 64.0, 256.0, 1024.0].iter().map(|&mu| norm_mu(&samples, &w, mu).unwrap()).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]), "{norms:?}");
    }
    // with f(0) = 0 the norm tends to zero
    let body = TruncatedSeries::scalar(2, 6, [(vec![2, 1], c(1.0)), (vec![1, 3], c(-2.0))]);
    let f = BorelSeries::new(body, mo).unwrap();
    let samples: Vec<_> = pts.iter().map(|p| (p.clone(), f.evaluate(p))).collect();
    assert!(norm_mu(&samples, &w, 1e4).unwrap() < 1e-3 * norm_mu(&samples, &w, 10.0).unwrap());
}
