use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rationalize, Q};
use crate::series::MultiIndex;

/// The data (α, k, s) of a monomial x^α, a level k > 0 and a weight vector s
/// in the closed simplex. Variables with s_j = 0 are inert under the
/// transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    alpha: MultiIndex,
    k: Q,
    s: Vec<Q>,
}

impl MonomialOrder {
    pub fn new(alpha: Vec<u32>, k: Q, s: Vec<Q>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != s.len() {
            return Err(Error::InvalidOrder(format!(
                "alpha has {} entries, weights have {}",
                alpha.len(),
                s.len()
            )));
        }
        if alpha.contains(&0) {
            return Err(Error::InvalidOrder("alpha entries must be ≥ 1".into()));
        }
        if k <= Q::zero() {
            return Err(Error::InvalidOrder(format!("k must be positive, got {k}")));
        }
        if s.iter().any(|w| *w < Q::zero()) {
            return Err(Error::InvalidOrder("weights must be non-negative".into()));
        }
        let total: Q = s.iter().copied().sum();
        if total != Q::one() {
            return Err(Error::InvalidOrder(format!("weights sum to {total}, not 1")));
        }
        Ok(MonomialOrder { alpha: MultiIndex(alpha), k, s })
    }

    /// Balanced weights s_j = α_j/|α|.
    pub fn balanced(alpha: Vec<u32>, k: Q) -> Result<Self> {
        let total: u32 = alpha.iter().sum();
        let s = alpha.iter().map(|&a| Q::new(a as i64, total.max(1) as i64)).collect();
        Self::new(alpha, k, s)
    }

    /// The order whose λ is the given vector: k = 1/⟨λ,α⟩ and s_j = kλ_jα_j.
    pub fn from_lambda(alpha: Vec<u32>, lambda: Vec<Q>) -> Result<Self> {
        if alpha.len() != lambda.len() {
            return Err(Error::InvalidOrder("alpha and lambda lengths differ".into()));
        }
        let t: Q = alpha.iter().zip(&lambda).map(|(&a, &l)| l * Q::from_integer(a as i64)).sum();
        if t <= Q::zero() {
            return Err(Error::InvalidOrder("lambda must have a positive entry".into()));
        }
        let k = t.recip();
        let s = alpha.iter().zip(&lambda).map(|(&a, &l)| l * Q::from_integer(a as i64) * k).collect();
        Self::new(alpha, k, s)
    }

    /// Builds an order from floating-point k and weights, rationalizing each
    /// within 1e-12. The weights must sum to 1 within 1e-12.
    pub fn from_f64(alpha: Vec<u32>, k: f64, s: &[f64]) -> Result<Self> {
        let sum: f64 = s.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidOrder(format!("weights sum to {sum}, not 1")));
        }
        let rat = |x: f64| rationalize(x).ok_or_else(|| Error::InvalidOrder(format!("{x} is not rational enough")));
        let k = rat(k)?;
        let mut q = s.iter().map(|&x| rat(x)).collect::<Result<Vec<_>>>()?;
        // absorb rounding of the last active weight so the sum is exactly 1
        if let Some(last) = q.iter().rposition(|w| !w.is_zero()) {
            let rest: Q = q.iter().enumerate().filter(|(i, _)| *i != last).map(|(_, w)| *w).sum();
            q[last] = Q::one() - rest;
        }
        Self::new(alpha, k, q)
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    pub fn alpha(&self) -> &MultiIndex {
        &self.alpha
    }

    pub fn k(&self) -> Q {
        self.k
    }

    pub fn weights(&self) -> &[Q] {
        &self.s
    }

    /// J_s, the indices with non-zero weight.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&j| !self.s[j].is_zero()).collect()
    }

    pub fn is_active(&self, j: usize) -> bool {
        !self.s[j].is_zero()
    }

    fn alpha_q(&self, j: usize) -> Q {
        Q::from_integer(self.alpha.0[j] as i64)
    }

    /// λ_j = s_j/(α_j k).
    pub fn lambda(&self) -> Vec<Q> {
        (0..self.dim()).map(|j| self.s[j] / (self.alpha_q(j) * self.k)).collect()
    }

    /// λ'_j = α_j k/s_j on J_s and 0 elsewhere.
    pub fn lambda_prime(&self) -> Vec<Q> {
        (0..self.dim())
            .map(|j| if self.is_active(j) { self.alpha_q(j) * self.k / self.s[j] } else { Q::zero() })
            .collect()
    }

    /// kα restricted to J_s (zero on inert variables).
    pub fn k_alpha(&self) -> Vec<Q> {
        (0..self.dim())
            .map(|j| if self.is_active(j) { self.alpha_q(j) * self.k } else { Q::zero() })
            .collect()
    }

    /// kα_J as an exponent; fails when some kα_j is fractional.
    pub fn k_alpha_index(&self) -> Result<MultiIndex> {
        self.k_alpha()
            .into_iter()
            .map(|q| {
                if q.is_integer() {
                    Ok(q.to_integer() as u32)
                } else {
                    Err(Error::Unsupported(format!(
                        "k·α_j = {q} is not on the integer exponent grid"
                    )))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(MultiIndex)
    }

    /// The order (Nα, k/N, s), which has the same λ.
    pub fn ramified(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidOrder("ramification index must be ≥ 1".into()));
        }
        Self::new(
            self.alpha.0.iter().map(|a| a * n).collect(),
            self.k / Q::from_integer(n as i64),
            self.s.clone(),
        )
    }

    /// Whether the blow-up π_ij is admissible: s_jα_i ≥ s_iα_j, and s_i = 0
    /// whenever s_j = 0.
    pub fn blowup_admissible(&self, i: usize, j: usize) -> bool {
        if i == j || i >= self.dim() || j >= self.dim() {
            return false;
        }
        let lhs = self.s[j] * self.alpha_q(i);
        let rhs = self.s[i] * self.alpha_q(j);
        lhs >= rhs && (self.is_active(j) || !self.is_active(i))
    }

    /// The order attached to f∘π_ij: α' = α + α_j e_i, same k, and
    /// λ' = λ − λ_i e_j.
    pub fn blowup(&self, i: usize, j: usize) -> Result<Self> {
        if !self.blowup_admissible(i, j) {
            return Err(Error::NotAdmissible(format!(
                "need s_j α_i ≥ s_i α_j for (i,j)=({i},{j}) with s={:?}",
                self.s
            )));
        }
        let mut alpha = self.alpha.0.clone();
        alpha[i] += self.alpha.0[j];
        let ratio = self.alpha_q(j) / self.alpha_q(i);
        let mut s = self.s.clone();
        s[i] = self.s[i] + ratio * self.s[i];
        s[j] = self.s[j] - ratio * self.s[i];
        Self::new(alpha, self.k, s)
    }
}
