use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::q_to_f64;

/// R_c(ξ) = max over c_j > 0 of |ξ_j|^{c_j}.
pub fn r_weight(xi: &[Complex64], c: &[f64]) -> f64 {
    xi.iter()
        .zip(c)
        .filter(|(_, cj)| **cj > 0.0)
        .map(|(x, cj)| x.norm().powf(*cj))
        .fold(0.0, f64::max)
}

/// Exponents α_j k/s_j on the active variables, zero elsewhere.
pub fn norm_exponents(mo: &MonomialOrder) -> Vec<f64> {
    mo.lambda_prime().iter().map(|q| q_to_f64(*q)).collect()
}

/// Least-squares fit of log‖value‖ ≈ log C + M·R_c(ξ); returns (C, M).
pub fn exp_growth_fit(samples: &[(Vec<Complex64>, f64)], c: &[f64]) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, v)| *v > 0.0 && v.is_finite())
        .map(|(xi, v)| (r_weight(xi, c), v.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::TooFewTerms(format!("growth fit needs 10 positive samples, got {}", pts.len())));
    }
    let lo = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p.0).fold(0.0, f64::max);
    if !(lo > 0.0 && hi >= 10.0 * lo) {
        return Err(Error::InvalidInput(format!("samples span R ∈ [{lo}, {hi}], less than a decade")));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    Ok(((my - slope * mx).exp(), slope))
}

/// I(s) = ∫₀¹ dτ/((1+s²τ²)(1+s²(1−τ)²)) in closed form.
pub fn i_of_s(s: f64) -> f64 {
    let s2 = s * s;
    if s.abs() < 1e-2 {
        // the closed form cancels badly near 0
        return (4.0 - 5.0 / 3.0 * s2 + 16.0 / 15.0 * s2 * s2) / (4.0 + s2);
    }
    2.0 * ((1.0 + s2).ln() + s * s.atan()) / (s2 * (4.0 + s2))
}

/// M₀ = sup_{s>0} s(1+s²)I(s), by golden-section search in log s.
pub fn m0() -> f64 {
    let h = |t: f64| {
        let s = t.exp();
        s * (1.0 + s * s) * i_of_s(s)
    };
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (-3.0f64, 5.0f64);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    while b - a > 1e-12 {
        if h(c) > h(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    h((a + b) / 2.0)
}

/// ‖f‖_μ over the samples: M₀·max |f(ξ)|(1 + R(ξ)²)e^{−μR(ξ)}, with the
/// maximum taken over samples and components.
pub fn norm_mu(samples: &[(Vec<Complex64>, Vec<Complex64>)], c: &[f64], mu: f64) -> Result<f64> {
    if !(mu > 0.0) {
        return Err(Error::InvalidInput(format!("μ must be positive, got {mu}")));
    }
    let m = m0();
    Ok(samples
        .iter()
        .map(|(xi, v)| {
            let r = r_weight(xi, c);
            let f = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            m * f * (1.0 + r * r) * (-mu * r).exp()
        })
        .fold(0.0, f64::max))
}

/// C_{μ,ρ} = 3((1 − 2/(μ^a ρ))^{−n} − 1), defined for μ > max{4√2, (2/ρ)^{1/a}}.
pub fn c_mu_rho(mu: f64, rho: f64, a: f64, n: u32) -> Result<f64> {
    if !(rho > 0.0 && a > 0.0) {
        return Err(Error::InvalidInput(format!("need ρ > 0 and a > 0, got ρ = {rho}, a = {a}")));
    }
    let bound = (4.0 * 2f64.sqrt()).max((2.0 / rho).powf(1.0 / a));
    if !(mu > bound) {
        return Err(Error::InvalidInput(format!("μ = {mu} must exceed {bound}")));
    }
    Ok(3.0 * ((1.0 - 2.0 / (mu.powf(a) * rho)).powi(-(n as i32)) - 1.0))
}
