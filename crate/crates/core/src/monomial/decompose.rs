use crate::error::{Error, Result};
use crate::gamma::ln_factorial;
use crate::scalar::Scalar;
use crate::series::{MultiIndex, TruncatedSeries};

/// The components f_{α,n} of f = Σ_n f_{α,n} x^{nα}, where each f_{α,n}
/// only has terms x^β with α ≰ β. Component n carries truncation order
/// T − n|α|; the list covers n = 0 … ⌊T/|α|⌋.
pub fn t_decompose<S: Scalar>(f: &TruncatedSeries<S>, alpha: &MultiIndex) -> Result<Vec<TruncatedSeries<S>>> {
    check_alpha(f, alpha)?;
    let t = f.trunc_order();
    let a = alpha.degree();
    let count = (t / a) as usize + 1;
    let mut parts: Vec<TruncatedSeries<S>> = (0..count)
        .map(|n| TruncatedSeries::new(f.dim(), f.width(), t - n as u32 * a))
        .collect();
    for (g, c) in f.iter() {
        let n = monomial_power(g, alpha);
        let beta = g.checked_sub(&alpha.scale(n)).expect("nα ≤ γ");
        parts[n as usize].add_term(beta, c.clone());
    }
    Ok(parts)
}

/// Σ_n parts[n] · x^{nα}, truncated at `trunc`.
pub fn reassemble<S: Scalar>(parts: &[TruncatedSeries<S>], alpha: &MultiIndex, trunc: u32) -> TruncatedSeries<S> {
    let dim = alpha.dim();
    let width = parts.first().map(|p| p.width()).unwrap_or(1);
    let mut out = TruncatedSeries::new(dim, width, trunc);
    for (n, p) in parts.iter().enumerate() {
        let shift = alpha.scale(n as u32);
        for (b, c) in p.iter() {
            out.add_term(b.add(&shift), c.clone());
        }
    }
    out
}

/// The largest n with nα ≤ γ.
pub(crate) fn monomial_power(gamma: &MultiIndex, alpha: &MultiIndex) -> u32 {
    gamma.0.iter().zip(&alpha.0).map(|(g, a)| g / a).min().unwrap_or(0)
}

/// App_γ(f): the terms x^β of f with γ ≰ β.
pub fn approximate<S: Scalar>(f: &TruncatedSeries<S>, gamma: &MultiIndex) -> Result<TruncatedSeries<S>> {
    if gamma.dim() != f.dim() {
        return Err(Error::DimensionMismatch(gamma.dim(), f.dim()));
    }
    Ok(f.filter(|b| !gamma.le(b)))
}

fn check_alpha<S: Scalar>(f: &TruncatedSeries<S>, alpha: &MultiIndex) -> Result<()> {
    if alpha.dim() != f.dim() {
        return Err(Error::DimensionMismatch(alpha.dim(), f.dim()));
    }
    if alpha.0.contains(&0) {
        return Err(Error::InvalidIndex(format!("α must have entries ≥ 1, got {alpha}")));
    }
    Ok(())
}

/// Factorial brackets attached to an exponent γ and a monomial α.
///
/// With N_min = min⌊γ_j/α_j⌋ and N_max = max⌊γ_j/α_j⌋ + 1:
/// |α|^{−|γ|} min γ_j!^{1/α_j} ≤ N_min! ≤ min γ_j!^{1/α_j} and
/// |α|^{−2|γ|} max γ_j!^{1/α_j} ≤ N_max! ≤ |α| 2^{2|γ|} max γ_j!^{1/α_j}.
/// Bounds are stored as natural logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellBounds {
    pub n_min: u32,
    pub n_max: u32,
    pub ln_min_lower: f64,
    pub ln_min_upper: f64,
    pub ln_max_lower: f64,
    pub ln_max_upper: f64,
}

impl ShellBounds {
    /// Whether both chains bracket the factorials they claim to.
    pub fn holds(&self) -> bool {
        let eps = 1e-12;
        let a = ln_factorial(self.n_min as u64);
        let b = ln_factorial(self.n_max as u64);
        self.ln_min_lower <= a + eps
            && a <= self.ln_min_upper + eps
            && self.ln_max_lower <= b + eps
            && b <= self.ln_max_upper + eps
    }
}

pub fn factorial_shell_bounds(gamma: &MultiIndex, alpha: &MultiIndex) -> Result<ShellBounds> {
    if gamma.is_zero() {
        return Err(Error::InvalidIndex("γ must be non-zero".into()));
    }
    if gamma.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch(gamma.dim(), alpha.dim()));
    }
    if alpha.0.contains(&0) {
        return Err(Error::InvalidIndex(format!("α must have entries ≥ 1, got {alpha}")));
    }
    let ratios: Vec<u32> = gamma.0.iter().zip(&alpha.0).map(|(g, a)| g / a).collect();
    let n_min = *ratios.iter().min().unwrap();
    let n_max = *ratios.iter().max().unwrap() + 1;
    let roots: Vec<f64> = gamma
        .0
        .iter()
        .zip(&alpha.0)
        .map(|(&g, &a)| ln_factorial(g as u64) / a as f64)
        .collect();
    let lo = roots.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = roots.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ln_abs_alpha = (alpha.degree() as f64).ln();
    let g = gamma.degree() as f64;
    Ok(ShellBounds {
        n_min,
        n_max,
        ln_min_lower: lo - g * ln_abs_alpha,
        ln_min_upper: lo,
        ln_max_lower: hi - 2.0 * g * ln_abs_alpha,
        ln_max_upper: hi + ln_abs_alpha + 2.0 * g * std::f64::consts::LN_2,
    })
}
