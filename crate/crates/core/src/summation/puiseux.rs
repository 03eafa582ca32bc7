use std::collections::BTreeMap;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::borel::BorelSeries;
use crate::error::{Error, Result};
use crate::scalar::{q_to_f64, Scalar, Q};

/// Largest denominator accepted for λ.
pub const MAX_LAMBDA_DENOM: i64 = 64;

/// Σ_q c_q u^{(start+q)/denom}, one coefficient vector per exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct PuiseuxSeries {
    pub denom: u32,
    pub start: i64,
    pub coeffs: Vec<Vec<Complex64>>,
}

impl PuiseuxSeries {
    /// Collects terms keyed by exponent onto the coarsest common grid.
    pub fn from_terms(terms: &BTreeMap<Q, Vec<Complex64>>, width: usize) -> Self {
        let nonzero: Vec<(&Q, &Vec<Complex64>)> =
            terms.iter().filter(|(_, c)| c.iter().any(|x| x.norm() > 0.0)).collect();
        if nonzero.is_empty() {
            return PuiseuxSeries { denom: 1, start: 0, coeffs: vec![vec![Complex64::zero(); width]] };
        }
        let denom = nonzero.iter().fold(1i64, |d, (e, _)| d.lcm(e.denom()));
        let idx = |e: &Q| e.numer() * (denom / e.denom());
        let start = idx(nonzero[0].0);
        let end = idx(nonzero[nonzero.len() - 1].0);
        let mut coeffs = vec![vec![Complex64::zero(); width]; (end - start + 1) as usize];
        for (e, c) in nonzero {
            for (slot, v) in coeffs[(idx(e) - start) as usize].iter_mut().zip(c) {
                *slot += v;
            }
        }
        PuiseuxSeries { denom: denom as u32, start, coeffs }
    }

    pub fn width(&self) -> usize {
        self.coeffs.first().map_or(0, Vec::len)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.iter().all(|c| c.iter().all(|x| x.norm() == 0.0))
    }

    pub fn exponent(&self, q: usize) -> Q {
        Q::new(self.start + q as i64, self.denom as i64)
    }

    /// gcd of the grid offsets q carrying a non-zero coefficient; 0 when the
    /// series vanishes and 1 for a single term.
    pub fn stride(&self) -> u32 {
        let g = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.iter().any(|x| x.norm() > 0.0))
            .fold(0usize, |g, (q, _)| g.gcd(&q));
        if g == 0 && !self.is_empty() {
            1
        } else {
            g as u32
        }
    }

    /// Coefficients of component k at the offsets 0, stride, 2·stride, …
    pub fn strided(&self, stride: u32, k: usize) -> Vec<Complex64> {
        self.coeffs.iter().step_by(stride.max(1) as usize).map(|c| c[k]).collect()
    }

    /// Principal-branch evaluation.
    pub fn evaluate(&self, u: Complex64) -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); self.width()];
        for (q, c) in self.coeffs.iter().enumerate() {
            let e = self.exponent(q);
            let p = if e.is_integer() { u.powi(e.to_integer() as i32) } else { u.powf(q_to_f64(e)) };
            for (a, v) in acc.iter_mut().zip(c) {
                *a += v * p;
            }
        }
        acc
    }
}

fn check_point<S: Scalar>(g: &BorelSeries<S>, x: &[Complex64]) -> Result<Vec<Q>> {
    if x.len() != g.dim() {
        return Err(Error::DimensionMismatch(x.len(), g.dim()));
    }
    let lambda = g.order.lambda();
    for (j, l) in lambda.iter().enumerate() {
        if *l.denom() > MAX_LAMBDA_DENOM {
            return Err(Error::Unsupported(format!("λ_{} = {l} has denominator above {MAX_LAMBDA_DENOM}", j + 1)));
        }
        if l.is_positive() && x[j].norm() == 0.0 {
            return Err(Error::InvalidInput(format!("x_{} = 0 lies on a coordinate axis of an active variable", j + 1)));
        }
    }
    Ok(lambda)
}

fn power(x: Complex64, e: Q) -> Complex64 {
    if e.is_zero() {
        Complex64::new(1.0, 0.0)
    } else if e.is_integer() {
        x.powi(e.to_integer() as i32)
    } else {
        x.powf(q_to_f64(e))
    }
}

/// Each represented term c·ξ^r contributes c·x^{r+shift} at u^{⟨r,λ⟩}.
pub(crate) fn restrict<S: Scalar>(g: &BorelSeries<S>, x: &[Complex64], shift: &[Q]) -> Result<PuiseuxSeries> {
    let lambda = check_point(g, x)?;
    let mut terms: BTreeMap<Q, Vec<Complex64>> = BTreeMap::new();
    for (r, c) in g.represented_terms() {
        let e: Q = r.iter().zip(&lambda).map(|(a, b)| a * b).sum();
        let mono = r
            .iter()
            .zip(shift)
            .zip(x)
            .fold(Complex64::new(1.0, 0.0), |m, ((rj, sj), xj)| m * power(*xj, rj + sj));
        let slot = terms.entry(e).or_insert_with(|| vec![Complex64::zero(); g.width()]);
        for (a, v) in slot.iter_mut().zip(&c) {
            *a += v.to_c64() * mono;
        }
    }
    Ok(PuiseuxSeries::from_terms(&terms, g.width()))
}

/// u ↦ g(x₁u^{λ₁}, …, x_d u^{λ_d}) as a Puiseux series in u, with principal
/// branches for fractional powers of x.
pub fn ray_restrict<S: Scalar>(g: &BorelSeries<S>, x: &[Complex64]) -> Result<PuiseuxSeries> {
    restrict(g, x, &vec![Q::zero(); g.dim()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::MonomialOrder;
    use crate::series::TruncatedSeries;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn balanced() -> MonomialOrder {
        MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).unwrap()
    }

    fn geometric(n: u32, weight: impl Fn(u32) -> f64) -> TruncatedSeries<Complex64> {
        TruncatedSeries::scalar(2, 2 * n, (0..=n).map(|k| (vec![k, k], c(weight(k)))))
    }

    #[test]
    fn geometric_restricts_to_powers_of_u() {
        let mo = balanced();
        let g = BorelSeries { body: geometric(10, |_| 1.0), offset: vec![Q::zero(); 2], order: mo };
        let p = ray_restrict(&g, &[c(1.0), c(1.0)]).unwrap();
        assert_eq!((p.denom, p.start, p.len()), (1, 0, 11));
        assert!(p.coeffs.iter().all(|v| (v[0] - c(1.0)).norm() < 1e-15));
        let p2 = ray_restrict(&g, &[c(2.0), c(1.0)]).unwrap();
        for (n, v) in p2.coeffs.iter().enumerate() {
            assert!((v[0] - c(2f64.powi(n as i32))).norm() < 1e-12);
        }
    }

    #[test]
    fn offset_is_recorded_as_leading_exponent() {
        let mo = balanced();
        let body = TruncatedSeries::scalar(2, 20, (1..=10).map(|k| (vec![k - 1, k - 1], c(k as f64))));
        let g = BorelSeries::new(body, mo).unwrap();
        let p = ray_restrict(&g, &[c(1.0), c(1.0)]).unwrap();
        assert_eq!((p.denom, p.start), (1, -1));
        for (q, v) in p.coeffs.iter().enumerate() {
            // exponent q − 1 carries coefficient q + 1
            assert!((v[0] - c(q as f64 + 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fractional_grid_and_stride() {
        let mo = MonomialOrder::new(vec![1, 1], Q::from_integer(1), vec![Q::new(1, 3), Q::new(2, 3)]).unwrap();
        let body = TruncatedSeries::scalar(2, 9, [(vec![1, 0], c(1.0)), (vec![2, 0], c(2.0)), (vec![0, 1], c(3.0))]);
        let g = BorelSeries { body, offset: vec![Q::zero(); 2], order: mo };
        let p = ray_restrict(&g, &[c(1.0), c(1.0)]).unwrap();
        assert_eq!((p.denom, p.start, p.len()), (3, 1, 2));
        assert_eq!(p.stride(), 1);
        assert!((p.coeffs[1][0] - c(5.0)).norm() < 1e-15);
        let u = c(0.7);
        let direct = g.evaluate(&[u.powf(1.0 / 3.0), u.powf(2.0 / 3.0)])[0];
        assert!((p.evaluate(u)[0] - direct).norm() < 1e-14);
    }

    #[test]
    fn axis_points_are_rejected() {
        let g = BorelSeries { body: geometric(3, |_| 1.0), offset: vec![Q::zero(); 2], order: balanced() };
        assert!(matches!(ray_restrict(&g, &[c(0.0), c(1.0)]), Err(Error::InvalidInput(_))));
        let inert = MonomialOrder::new(vec![1, 1], Q::from_integer(1), vec![Q::from_integer(1), Q::zero()]).unwrap();
        let g = BorelSeries { body: geometric(3, |_| 1.0), offset: vec![Q::zero(); 2], order: inert };
        assert!(ray_restrict(&g, &[c(1.0), c(0.0)]).is_ok());
    }

    #[test]
    fn stride_detects_even_series() {
        let mo = MonomialOrder::new(vec![1], Q::from_integer(1), vec![Q::from_integer(1)]).unwrap();
        let body = TruncatedSeries::scalar(1, 10, (0..=5).map(|k| (vec![2 * k], c(1.0))));
        let g = BorelSeries { body, offset: vec![Q::zero()], order: mo };
        let p = ray_restrict(&g, &[c(1.0)]).unwrap();
        assert_eq!(p.stride(), 2);
        assert_eq!(p.strided(2, 0).len(), 6);
    }
}
