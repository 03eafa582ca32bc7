use nalgebra::DMatrix;
use num_complex::Complex64;

use super::puiseux::PuiseuxSeries;
use crate::error::{Error, Result};
use crate::pde::{eigenvalues, Mat};

const PADE_TOL: f64 = 1e-14;
const DOUBLET_DIST: f64 = 1e-8;
const DOUBLET_RESIDUE: f64 = 1e-10;

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(c0(), |acc, c| acc * z + c)
}

fn derivative(p: &[Complex64]) -> Vec<Complex64> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * i as f64).collect()
}

/// Roots of Σ p_i z^i from the companion matrix, polished by Newton steps.
pub(crate) fn poly_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = match p.iter().rposition(|c| c.norm() > 0.0) {
        Some(d) => d,
        None => return Err(Error::InvalidInput("zero polynomial has no isolated roots".into())),
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = p[deg];
    let mut m = Mat::<Complex64>::zeros(deg);
    for j in 0..deg {
        m.data[j] = -p[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        m.data[i * deg + i - 1] = Complex64::new(1.0, 0.0);
    }
    let dp = derivative(&p[..=deg]);
    let mut roots = eigenvalues(&m)?;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = horner(&dp, *r);
            if d.norm() == 0.0 {
                break;
            }
            let step = horner(&p[..=deg], *r) / d;
            if !step.is_finite() || step.norm() > 1e-3 * (1.0 + r.norm()) {
                break;
            }
            *r -= step;
        }
    }
    Ok(roots)
}

/// Divides p by (z − r), dropping the remainder.
fn deflate(p: &[Complex64], r: Complex64) -> Vec<Complex64> {
    let n = p.len() - 1;
    let mut q = vec![c0(); n];
    let mut acc = c0();
    for i in (1..=n).rev() {
        acc = acc * r + p[i];
        q[i - 1] = acc;
    }
    q
}

/// A rational function num(z)/den(z), coefficients in ascending powers,
/// together with the poles of den that survived doublet filtering.
#[derive(Clone, Debug, PartialEq)]
pub struct PadeApproximant {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

impl PadeApproximant {
    pub fn zero() -> Self {
        PadeApproximant { num: vec![c0()], den: vec![Complex64::new(1.0, 0.0)], poles: Vec::new() }
    }

    pub fn polynomial(c: &[Complex64]) -> Self {
        PadeApproximant { num: c.to_vec(), den: vec![Complex64::new(1.0, 0.0)], poles: Vec::new() }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            return horner(&self.num, z) / horner(&self.den, z);
        }
        // reversed polynomials keep Horner stable outside the unit disc
        let w = z.inv();
        let rev = |p: &[Complex64]| p.iter().fold(c0(), |acc, c| acc * w + c);
        let shift = self.num.len() as i32 - self.den.len() as i32;
        rev(&self.num) / rev(&self.den) * z.powi(shift)
    }

    /// Residue of num/den at a simple pole.
    pub fn residue(&self, pole: Complex64) -> Complex64 {
        horner(&self.num, pole) / horner(&derivative(&self.den), pole)
    }
}

fn null_vector(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let cols = m.ncols();
    let mut sq = DMatrix::<Complex64>::zeros(cols, cols);
    sq.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, s)| if *s < best.1 { (i, *s) } else { best });
    v_t.row(k).iter().map(|c| c.conj()).collect()
}

/// Type [m/n] Padé approximant from Taylor coefficients c_0..c_{m+n}, using
/// SVD-based degree reduction so that spurious pole-zero pairs are not
/// created by rank deficiency.
pub fn robust_pade(c: &[Complex64], m: usize, n: usize) -> Result<PadeApproximant> {
    if c.len() < m + n + 1 {
        return Err(Error::TooFewTerms(format!("[{m}/{n}] needs {} coefficients, got {}", m + n + 1, c.len())));
    }
    let c = &c[..m + n + 1];
    let ts = PADE_TOL * c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if c[..=m].iter().all(|x| x.norm() <= ts) {
        return Ok(PadeApproximant::zero());
    }
    let (mut m, mut n) = (m, n);
    let toeplitz = |rows: usize, cols: usize| {
        DMatrix::from_fn(rows, cols, |i, j| if i >= j { c[i - j] } else { c0() })
    };
    let (a, b);
    loop {
        if n == 0 {
            a = c[..=m].to_vec();
            b = vec![Complex64::new(1.0, 0.0)];
            break;
        }
        let z = toeplitz(m + n + 1, n + 1);
        let lower = z.rows(m + 1, n).into_owned();
        let rank = lower.singular_values().iter().filter(|s| **s > ts).count();
        if rank == n {
            let nv = null_vector(&lower);
            // reweighting sharpens the null vector when b has tiny entries
            let d: Vec<f64> = nv.iter().map(|x| x.norm() + f64::EPSILON.sqrt()).collect();
            let scaled = DMatrix::from_fn(n, n + 1, |i, j| lower[(i, j)] * d[j]);
            let nv2 = null_vector(&scaled);
            let bb: Vec<Complex64> = nv2.iter().zip(&d).map(|(x, w)| x * *w).collect();
            let norm = bb.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            b = bb.iter().map(|x| x / norm).collect();
            let top = z.rows(0, m + 1);
            a = (0..=m).map(|i| (0..=n).map(|j| top[(i, j)] * b[j]).sum()).collect();
            break;
        }
        let drop = n - rank;
        if m < drop {
            m = 0;
        } else {
            m -= drop;
        }
        n = rank;
    }
    let first = b.iter().position(|x| x.norm() > PADE_TOL).unwrap_or(0);
    let mut b = b[first..].to_vec();
    let mut a = if first < a.len() { a[first..].to_vec() } else { vec![c0()] };
    if let Some(last) = b.iter().rposition(|x| x.norm() > PADE_TOL) {
        b.truncate(last + 1);
    }
    match a.iter().rposition(|x| x.norm() > ts) {
        Some(last) => a.truncate(last + 1),
        None => a = vec![c0()],
    }
    let b0 = b[0];
    let num: Vec<Complex64> = a.iter().map(|x| x / b0).collect();
    let den: Vec<Complex64> = b.iter().map(|x| x / b0).collect();
    let poles = poly_roots(&den)?;
    filter_doublets(PadeApproximant { num, den, poles })
}

/// Removes pole-zero pairs closer than 1e−8 whose residue is below 1e−10.
fn filter_doublets(mut p: PadeApproximant) -> Result<PadeApproximant> {
    if p.poles.is_empty() || p.num.len() < 2 {
        return Ok(p);
    }
    let mut zeros = poly_roots(&p.num)?;
    let mut kept = Vec::new();
    for pole in p.poles.clone() {
        let res = p.residue(pole).norm();
        let hit = zeros
            .iter()
            .position(|z| (z - pole).norm() < DOUBLET_DIST * pole.norm().max(1.0));
        match hit {
            Some(i) if res < DOUBLET_RESIDUE || !res.is_finite() => {
                let z = zeros.swap_remove(i);
                p.num = deflate(&p.num, z);
                p.den = deflate(&p.den, pole);
            }
            _ => kept.push(pole),
        }
    }
    p.poles = kept;
    Ok(p)
}

/// A singularity of the continued Borel function in the u-plane, with the
/// residue of the ray integrand there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RayPole {
    pub u: Complex64,
    pub residue: Complex64,
}

/// Analytic continuation of a ray-restricted Borel function:
/// u ↦ v^start·P(v^stride/scale) with v = u^{1/denom} on the principal
/// branch and one rational function P per component.
#[derive(Clone, Debug)]
pub struct RayContinuation {
    pub denom: u32,
    pub start: i64,
    pub stride: u32,
    pub scale: f64,
    pub parts: Vec<PadeApproximant>,
}

impl RayContinuation {
    pub fn width(&self) -> usize {
        self.parts.len()
    }

    /// The series itself, without continuation.
    pub fn polynomial(p: &PuiseuxSeries) -> Self {
        let stride = p.stride().max(1);
        let parts = (0..p.width())
            .map(|k| PadeApproximant::polynomial(&p.strided(stride, k)))
            .collect();
        RayContinuation { denom: p.denom, start: p.start, stride, scale: 1.0, parts }
    }

    /// Value at v = u^{1/denom}.
    pub fn eval_root(&self, v: Complex64) -> Vec<Complex64> {
        let pre = if self.start == 0 { Complex64::new(1.0, 0.0) } else { v.powi(self.start as i32) };
        let z = v.powi(self.stride as i32) / self.scale;
        self.parts.iter().map(|p| pre * p.eval(z)).collect()
    }

    pub fn eval(&self, u: Complex64) -> Vec<Complex64> {
        let v = if self.denom == 1 { u } else { u.powf(1.0 / self.denom as f64) };
        self.eval_root(v)
    }

    /// Poles on the principal sheet of the u-plane.
    pub fn poles(&self) -> Vec<RayPole> {
        let (d, g) = (self.denom as f64, self.stride as f64);
        let mut out = Vec::new();
        for part in &self.parts {
            for zp in &part.poles {
                let wp = zp * self.scale;
                let rw = part.residue(*zp) * self.scale;
                for m in 0..self.stride {
                    let arg_v = (wp.arg() + std::f64::consts::TAU * m as f64) / g;
                    let arg_v = (arg_v + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU) - std::f64::consts::PI;
                    if arg_v.abs() * d > std::f64::consts::PI + 1e-12 {
                        continue;
                    }
                    let v = Complex64::from_polar(wp.norm().powf(1.0 / g), arg_v);
                    let u = v.powf(d);
                    // du/dw = (d/g)·u/w, and the prefactor v^start
                    let res = rw * (d / g) * u / wp * v.powi(self.start as i32);
                    out.push(RayPole { u, residue: res });
                }
            }
        }
        out.sort_by(|a, b| a.u.norm().total_cmp(&b.u.norm()));
        // both sides of a cut map to the same u
        out.dedup_by(|a, b| (a.u - b.u).norm() <= 1e-12 * (1.0 + b.u.norm()));
        out
    }
}

fn radius_estimate(p: &PuiseuxSeries, stride: u32) -> f64 {
    let pts: Vec<(f64, f64)> = (0..p.width())
        .flat_map(|k| {
            p.strided(stride, k)
                .into_iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(i, c)| (i as f64, c.norm().ln()))
                .collect::<Vec<_>>()
        })
        .collect();
    let tail: Vec<(f64, f64)> = {
        let half = pts.iter().map(|p| p.0).fold(0.0, f64::max) / 2.0;
        pts.into_iter().filter(|p| p.0 >= half).collect()
    };
    if tail.len() < 2 {
        return 1.0;
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|p| p.0).sum::<f64>() / n;
    let my = tail.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = tail.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 1.0;
    }
    let slope = tail.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    (-slope).exp().clamp(1e-8, 1e8)
}

/// Near-diagonal Padé continuation of a Puiseux series in w = u^{stride/D},
/// after rescaling w by an estimate of the radius of convergence.
pub fn pade_continue(p: &PuiseuxSeries, degree: Option<usize>) -> Result<RayContinuation> {
    let stride = p.stride();
    if stride == 0 {
        return Err(Error::InvalidInput("degenerate Padé input: every coefficient vanishes".into()));
    }
    let count = (p.len() - 1) / stride as usize + 1;
    if count < 8 {
        return Err(Error::TooFewTerms(format!("Padé continuation needs 8 coefficients, got {count}")));
    }
    let scale = radius_estimate(p, stride);
    let n = degree.unwrap_or((count - 1) / 2).min(count - 1);
    let m = count - 1 - n;
    let parts = (0..p.width())
        .map(|k| {
            let c: Vec<Complex64> = p
                .strided(stride, k)
                .iter()
                .enumerate()
                .map(|(i, c)| c * scale.powi(i as i32))
                .collect();
            robust_pade(&c, m, n)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RayContinuation { denom: p.denom, start: p.start, stride, scale, parts })
}
