use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NODES: usize = 20;
const MAX_PANELS: usize = 20_000;
const MAX_DEPTH: u32 = 48;

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Clone, Debug)]
pub(crate) struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub(crate) fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // three-term recurrence for P_n and its derivative
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub(crate) fn apply<F>(&self, f: &F, a: f64, b: f64, width: usize) -> Vec<Complex64>
    where
        F: Fn(f64) -> Vec<Complex64>,
    {
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        let mut acc = vec![Complex64::new(0.0, 0.0); width];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            for (s, v) in acc.iter_mut().zip(f(m + h * x)) {
                *s += v * (w * h);
            }
        }
        acc
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Adaptive panel quadrature of a vector-valued f over [a, b]: a panel is
/// accepted once its one-panel and two-half-panel rules agree to its share of
/// the absolute tolerance. Returns the integral and the summed disagreements.
pub(crate) fn integrate<F>(f: F, a: f64, b: f64, width: usize, tol: f64, initial: usize) -> Result<(Vec<Complex64>, f64)>
where
    F: Fn(f64) -> Vec<Complex64>,
{
    let gl = GaussLegendre::new(NODES);
    let len = b - a;
    let mut total = vec![Complex64::new(0.0, 0.0); width];
    let mut err = 0.0;
    let mut panels = 0usize;
    let step = len / initial.max(1) as f64;
    let mut stack: Vec<(f64, f64, Vec<Complex64>, u32)> = (0..initial.max(1))
        .map(|i| {
            let (l, r) = (a + step * i as f64, a + step * (i + 1) as f64);
            (l, r, gl.apply(&f, l, r, width), 0)
        })
        .collect();
    while let Some((l, r, whole, depth)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::NonConvergence(format!("quadrature exceeded {MAX_PANELS} panels")));
        }
        let mid = (l + r) / 2.0;
        let left = gl.apply(&f, l, mid, width);
        let right = gl.apply(&f, mid, r, width);
        let halves: Vec<Complex64> = left.iter().zip(&right).map(|(x, y)| x + y).collect();
        let diff = max_diff(&whole, &halves);
        if !diff.is_finite() || halves.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonConvergence(format!("integrand is not finite near t = {mid}")));
        }
        if diff <= tol * (r - l) / len || diff <= 1e-15 * halves.iter().map(|v| v.norm()).fold(0.0, f64::max) {
            for (t, h) in total.iter_mut().zip(&halves) {
                *t += h;
            }
            err += diff;
        } else if depth >= MAX_DEPTH {
            return Err(Error::NonConvergence(format!("quadrature refinement stalled near t = {mid}")));
        } else {
            stack.push((l, mid, left, depth + 1));
            stack.push((mid, r, right, depth + 1));
        }
    }
    Ok((total, err))
}
