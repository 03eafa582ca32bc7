use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::ln_factorial;
use crate::scalar::Scalar;
use crate::series::{MultiIndex, TruncatedSeries};

/// Fitted bound ‖a_β‖ ≈ C A^{|β|} min_j β_j!^{s/α_j}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GevreyFit {
    #[serde(rename = "s")]
    pub s_hat: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub r2: f64,
}

const MIN_DEGREE: u32 = 8;
const MIN_SHELLS: usize = 4;

/// Least-squares fit of the dominant coefficient of each degree shell.
///
/// For each shell D the largest ‖a_β‖ (ties broken by the lexicographically
/// smallest β) is regressed as ln m_D ≈ ln C + D ln A + s·min_j ln(β_j!)/α_j.
pub fn gevrey_fit<S: Scalar>(f: &TruncatedSeries<S>, alpha: &MultiIndex) -> Result<GevreyFit> {
    if alpha.dim() != f.dim() {
        return Err(Error::DimensionMismatch(alpha.dim(), f.dim()));
    }
    if alpha.0.contains(&0) {
        return Err(Error::InvalidIndex(format!("α must have entries ≥ 1, got {alpha}")));
    }
    let mut shells: Vec<(u32, f64, MultiIndex)> = Vec::new();
    for (b, c) in f.iter() {
        let norm = c.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            continue;
        }
        let deg = b.degree();
        match shells.last_mut() {
            Some(last) if last.0 == deg => {
                let better = norm > last.1 || (norm == last.1 && b.lex_cmp(&last.2).is_lt());
                if better {
                    *last = (deg, norm, b.clone());
                }
            }
            _ => shells.push((deg, norm, b.clone())),
        }
    }
    let max_deg = shells.last().map(|s| s.0).unwrap_or(0);
    if max_deg < MIN_DEGREE || shells.len() < MIN_SHELLS {
        return Err(Error::TooFewTerms(format!(
            "need non-zero shells up to degree ≥ {MIN_DEGREE} and at least {MIN_SHELLS} of them, got {} up to {max_deg}",
            shells.len()
        )));
    }
    let y: Vec<f64> = shells.iter().map(|s| s.1.ln()).collect();
    let deg: Vec<f64> = shells.iter().map(|s| s.0 as f64).collect();
    let fac: Vec<f64> = shells
        .iter()
        .map(|s| {
            s.2 .0
                .iter()
                .zip(&alpha.0)
                .map(|(&b, &a)| ln_factorial(b as u64) / a as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    let (coef, _) = regress(&y, &[&deg, &fac]);
    let (ln_c, ln_a, s) = if coef[2] >= 0.0 {
        (coef[0], coef[1], coef[2])
    } else {
        let (c2, _) = regress(&y, &[&deg]);
        (c2[0], c2[1], 0.0)
    };
    let fitted: Vec<f64> = (0..y.len()).map(|i| ln_c + ln_a * deg[i] + s * fac[i]).collect();
    let r2 = r2_of(&y, &fitted);
    Ok(GevreyFit { s_hat: s, c: ln_c.exp(), a: ln_a.exp(), r2 })
}

/// Ordinary least squares with an intercept; returns coefficients and r².
fn regress(y: &[f64], cols: &[&Vec<f64>]) -> (Vec<f64>, f64) {
    let n = y.len();
    let p = cols.len() + 1;
    // standardize the regressors so the SVD sees comparable columns
    let mut scale = vec![1.0; p];
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { cols[j - 1][i] });
    for j in 1..p {
        let m = x.column(j).amax();
        if m > 0.0 {
            scale[j] = m;
        }
    }
    let xs = DMatrix::from_fn(n, p, |i, j| x[(i, j)] / scale[j]);
    let svd = xs.svd(true, true);
    let b = svd
        .solve(&DVector::from_column_slice(y), 1e-12)
        .unwrap_or_else(|_| DVector::zeros(p));
    let coef: Vec<f64> = (0..p).map(|j| b[j] / scale[j]).collect();
    let fitted: Vec<f64> = (0..n).map(|i| (0..p).map(|j| x[(i, j)] * coef[j]).sum()).collect();
    let r2 = r2_of(y, &fitted);
    (coef, r2)
}

fn r2_of(y: &[f64], fitted: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let res: f64 = y.iter().zip(fitted).map(|(v, f)| (v - f).powi(2)).sum();
    if tot <= 1e-300 {
        if res <= 1e-20 { 1.0 } else { 0.0 }
    } else {
        (1.0 - res / tot).clamp(0.0, 1.0)
    }
}
