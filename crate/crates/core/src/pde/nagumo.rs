use std::f64::consts::{E, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{MultiIndex, TruncatedSeries};

/// Sample grid on the polydisc D_r^n × D_R^m: in each variable, `radial`
/// radii from 0 to the boundary times `angular` arguments.
#[derive(Clone, Copy, Debug)]
pub struct NagumoGrid {
    pub r: f64,
    pub big_r: f64,
    pub radial: usize,
    pub angular: usize,
}

impl NagumoGrid {
    fn points(&self, n: usize, d: usize) -> Vec<Vec<Complex64>> {
        let one = |j: usize| -> Vec<Complex64> {
            let rad = if j < n { self.r } else { self.big_r };
            let mut v = Vec::with_capacity(self.radial * self.angular);
            for i in 0..self.radial {
                let rho = if self.radial == 1 { rad } else { rad * i as f64 / (self.radial - 1) as f64 };
                for a in 0..self.angular {
                    v.push(Complex64::from_polar(rho, TAU * a as f64 / self.angular as f64));
                    if rho == 0.0 {
                        break;
                    }
                }
            }
            v
        };
        let mut pts: Vec<Vec<Complex64>> = vec![Vec::new()];
        for j in 0..d {
            let axis = one(j);
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    axis.iter().map(move |z| {
                        let mut q = p.clone();
                        q.push(*z);
                        q
                    })
                })
                .collect();
        }
        pts
    }
}

/// Grid supremum of |f(x, ε)|·Π_j (r − |x_j|)^l, where the first `n`
/// variables are the x-variables.
pub fn nagumo_norm(f: &TruncatedSeries<Complex64>, n: usize, l: u32, grid: &NagumoGrid) -> Result<f64> {
    if grid.r <= 0.0 || grid.big_r < 0.0 {
        return Err(Error::InvalidInput("Nagumo radii must be positive".into()));
    }
    if n > f.dim() {
        return Err(Error::DimensionMismatch(n, f.dim()));
    }
    let mut best = 0.0f64;
    for p in grid.points(n, f.dim()) {
        let w: f64 = p[..n].iter().map(|z| (grid.r - z.norm()).max(0.0).powi(l as i32)).product();
        if w == 0.0 {
            continue;
        }
        let v = f.evaluate(&p).iter().map(|z| z.norm()).fold(0.0, f64::max);
        best = best.max(v * w);
    }
    Ok(best)
}

/// Outcome of the majorant inequalities on one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct NagumoReport {
    pub sum: bool,
    pub product: bool,
    pub derivative: bool,
}

impl NagumoReport {
    pub fn all(&self) -> bool {
        self.sum && self.product && self.derivative
    }
}

/// Checks ‖f+g‖_l ≤ ‖f‖_l + ‖g‖_l, ‖fg‖_{l+k} ≤ ‖f‖_l‖g‖_k and
/// ‖∂f/∂x_j‖_{l+1} ≤ e(l+1)r^{n−1}‖f‖_l for every x-variable j.
pub fn nagumo_checks(
    f: &TruncatedSeries<Complex64>,
    g: &TruncatedSeries<Complex64>,
    n: usize,
    l: u32,
    k: u32,
    grid: &NagumoGrid,
) -> Result<NagumoReport> {
    let slack = 1.0 + 1e-12;
    let fl = nagumo_norm(f, n, l, grid)?;
    let gl = nagumo_norm(g, n, l, grid)?;
    let gk = nagumo_norm(g, n, k, grid)?;
    let sum = nagumo_norm(&f.add(g)?, n, l, grid)? <= (fl + gl) * slack;
    let product = nagumo_norm(&f.mul(g)?, n, l + k, grid)? <= fl * gk * slack;
    let bound = E * (l + 1) as f64 * grid.r.powi(n as i32 - 1) * fl;
    let mut derivative = true;
    for j in 0..n {
        let df = f.derivative(&MultiIndex::unit(f.dim(), j)).with_trunc(f.trunc_order());
        derivative &= nagumo_norm(&df, n, l + 1, grid)? <= bound * slack;
    }
    Ok(NagumoReport { sum, product, derivative })
}
