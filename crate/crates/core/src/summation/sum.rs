use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::pade::{pade_continue, RayContinuation, RayPole};
use super::puiseux::{restrict, PuiseuxSeries};
use super::quadrature::integrate;
use crate::borel::{formal_borel, split_summand};
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::{q_to_f64, Q};
use crate::series::TruncatedSeries;

const MIN_PADE_TERMS: usize = 8;

/// Value of a Borel sum at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumResult {
    pub value: Vec<Complex64>,
    /// Direction φ of the u-ray actually integrated.
    pub direction: f64,
    pub err: f64,
    /// Retained poles of the continued Borel function in the u-plane.
    pub poles: Vec<Complex64>,
}

impl SumResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numeric data serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumOptions {
    pub tol: f64,
    /// Denominator degree of the Padé approximant; near-diagonal when absent.
    pub degree: Option<usize>,
}

impl Default for SumOptions {
    fn default() -> Self {
        SumOptions { tol: 1e-10, degree: None }
    }
}

pub(crate) fn wrap_pi(x: f64) -> f64 {
    let t = (x + PI).rem_euclid(TAU) - PI;
    if t <= -PI {
        t + TAU
    } else {
        t
    }
}

fn ray_distance(p: Complex64, phi: f64) -> f64 {
    let dir = Complex64::from_polar(1.0, phi);
    let s = (p * dir.conj()).re.max(0.0);
    (p - dir * s).norm()
}

/// Size of the jump in the Laplace integral when the ray sweeps past the pole.
fn pole_weight(p: &RayPole) -> f64 {
    TAU * (p.residue * (-p.u).exp()).norm()
}

fn ray_length(cont: &RayContinuation, phi: f64, tol: f64) -> Result<f64> {
    let c = phi.cos();
    let mut t = (-(tol / 10.0).ln() + 5.0) / c;
    for _ in 0..60 {
        let g = cont
            .eval(Complex64::from_polar(t, phi))
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        let bound = (-t * c).exp() * g * (t + 1.0) / c;
        if bound.is_finite() && bound < tol / 10.0 {
            return Ok(t);
        }
        t *= 1.25;
    }
    Err(Error::NonConvergence(format!("Borel function grows too fast along direction {phi}")))
}

fn check_ray(poles: &[RayPole], phi: f64, reach: f64, tol: f64) -> Result<()> {
    for p in poles {
        let near = ray_distance(p.u, phi) < 10.0 * tol * (1.0 + p.u.norm());
        if near && p.u.norm() <= reach && pole_weight(p) > tol {
            return Err(Error::SingularDirection(format!(
                "pole of the continued Borel function at u = {} lies on the ray arg u = {phi}",
                p.u
            )));
        }
    }
    Ok(())
}

/// ∫₀^{e^{iφ}∞} g(u)e^{−u}du for the continued Borel function g, with the
/// substitution u = τ^D e^{iφ} removing the branch point at the origin.
fn laplace_ray(cont: &RayContinuation, phi: f64, tol: f64) -> Result<(Vec<Complex64>, f64)> {
    if phi.abs() >= FRAC_PI_2 {
        return Err(Error::InvalidInput(format!("ray direction {phi} is outside (−π/2, π/2)")));
    }
    let d = cont.denom as i32;
    if cont.start + d as i64 - 1 < 0 {
        return Err(Error::InvalidInput("Borel function is not integrable at the origin".into()));
    }
    let t_max = ray_length(cont, phi, tol)?;
    check_ray(&cont.poles(), phi, 2.0 * t_max, tol)?;
    let e = Complex64::from_polar(1.0, phi);
    let ev = Complex64::from_polar(1.0, phi / d as f64);
    let f = |tau: f64| -> Vec<Complex64> {
        let jac = e * (d as f64) * tau.powi(d - 1) * (-e * tau.powi(d)).exp();
        cont.eval_root(ev * tau).into_iter().map(|v| v * jac).collect()
    };
    integrate(f, 0.0, t_max.powf(1.0 / d as f64), cont.width(), tol, 8)
}

fn prefactor(mo: &MonomialOrder, x: &[Complex64]) -> Complex64 {
    mo.k_alpha().iter().zip(x).fold(Complex64::new(1.0, 0.0), |acc, (e, xj)| {
        if e.is_zero() {
            acc
        } else if e.is_integer() {
            acc * xj.powi(e.to_integer() as i32)
        } else {
            acc * xj.powf(q_to_f64(*e))
        }
    })
}

/// L_{λ,φ}(g)(x) = x^{kα_J}·∫₀^{e^{iφ}∞} g(x u^λ)e^{−u}du, where `cont` is
/// the continuation of u ↦ g(x u^λ).
pub fn laplace_quadrature(
    cont: &RayContinuation,
    mo: &MonomialOrder,
    x: &[Complex64],
    phi: f64,
    tol: f64,
) -> Result<SumResult> {
    if x.len() != mo.dim() {
        return Err(Error::DimensionMismatch(x.len(), mo.dim()));
    }
    let (v, err) = laplace_ray(cont, phi, tol)?;
    let pre = prefactor(mo, x);
    Ok(SumResult {
        value: v.into_iter().map(|z| z * pre).collect(),
        direction: phi,
        err: err * pre.norm(),
        poles: cont.poles().iter().map(|p| p.u).collect(),
    })
}

/// Poles that persist, within 2% of their modulus, in the approximant built
/// from two fewer coefficients. Poles of approximants to entire functions
/// drift with the degree; those of genuine singularities do not.
fn confirmed_poles(p: &PuiseuxSeries, cont: &RayContinuation, poles: &[RayPole]) -> Result<Vec<RayPole>> {
    let stride = cont.stride as usize;
    let mut shorter = p.clone();
    shorter.coeffs.truncate(p.len() - 2 * stride);
    let n = cont.parts.iter().map(|a| a.den.len().saturating_sub(1)).max().unwrap_or(0);
    let other = pade_continue(&shorter, Some(n.saturating_sub(1)))?.poles();
    Ok(poles
        .iter()
        .filter(|a| other.iter().any(|b| (a.u - b.u).norm() <= 0.02 * a.u.norm()))
        .copied()
        .collect())
}

/// Direction of the u-ray: φ₀ itself when |φ₀| ≤ π/4, otherwise the ray is
/// turned to ±π/4 provided no pole with a non-negligible jump lies in the
/// swept sector.
fn choose_direction(phi0: f64, poles: &[RayPole], tol: f64) -> Result<f64> {
    if phi0.abs() <= FRAC_PI_4 {
        return Ok(phi0);
    }
    let target = FRAC_PI_4.copysign(phi0);
    let (lo, hi) = if phi0 > 0.0 { (target, phi0) } else { (phi0, target) };
    let crossed = poles.iter().any(|p| {
        let mut a = p.u.arg();
        if hi >= PI - 1e-12 && a <= -PI + 1e-12 {
            a = PI;
        }
        a >= lo - 1e-12 && a <= hi + 1e-12 && pole_weight(p) > tol
    });
    if !crossed {
        Ok(target)
    } else if phi0.abs() < FRAC_PI_2 - 1e-3 {
        Ok(phi0)
    } else {
        Err(Error::SingularDirection(format!(
            "a Borel singularity separates direction {phi0} from the admissible half-plane"
        )))
    }
}

/// The x^α–k–s–Borel sum of f in direction θ at x: the untransformed head
/// evaluated at x plus the Laplace transform of the Padé-continued Borel
/// transform of the tail. Terms whose ⟨β,λ⟩ reaches the first weighted
/// degree not fully present at order T are dropped.
pub fn monomial_borel_sum(
    f: &TruncatedSeries<Complex64>,
    mo: &MonomialOrder,
    x: &[Complex64],
    theta: f64,
    opts: &SumOptions,
) -> Result<SumResult> {
    if mo.dim() != f.dim() {
        return Err(Error::DimensionMismatch(mo.dim(), f.dim()));
    }
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch(x.len(), f.dim()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let (head, tail) = split_summand(f, mo);
    let mut value = head.evaluate(x);
    let lambda = mo.lambda();
    let lmin = lambda.iter().filter(|l| l.is_positive()).min().copied().unwrap_or_else(Q::zero);
    let cut = lmin * Q::from_integer(f.trunc_order() as i64 + 1);
    let tail = tail.filter(|b| b.dot(&lambda) < cut);

    let arg_x: f64 = mo.alpha().0.iter().zip(x).map(|(&a, xj)| a as f64 * xj.arg()).sum();
    let k = q_to_f64(mo.k());
    let phi0 = wrap_pi(k * theta - k * arg_x);
    if tail.iter().all(|(_, c)| c.iter().all(|v| v.norm() == 0.0)) {
        return Ok(SumResult { value, direction: phi0, err: 0.0, poles: Vec::new() });
    }

    let g = formal_borel(&tail, mo)?;
    let p = restrict(&g, x, &mo.k_alpha())?;
    let stride = p.stride().max(1) as usize;
    let count = (p.len() - 1) / stride + 1;
    let cont = if count < MIN_PADE_TERMS {
        RayContinuation::polynomial(&p)
    } else {
        pade_continue(&p, opts.degree)?
    };
    let poles = cont.poles();
    let confirmed = if count < MIN_PADE_TERMS + 2 {
        poles.clone()
    } else {
        confirmed_poles(&p, &cont, &poles)?
    };
    let phi = choose_direction(phi0, &confirmed, opts.tol)?;
    let (v, err) = laplace_ray(&cont, phi, opts.tol)?;
    for (a, b) in value.iter_mut().zip(v) {
        *a += b;
    }
    Ok(SumResult { value, direction: phi, err, poles: poles.iter().map(|p| p.u).collect() })
}
