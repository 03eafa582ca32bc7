use std::collections::BTreeMap;


use super::matrix::Mat;
use super::problem::{PdeProblem, YPoly};
use super::solve::{lhs_operator, solve_normalized};
use crate::borel::{convolve, formal_borel, BorelSeries};
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::Scalar;
use crate::series::{MultiIndex, TruncatedSeries};

/// The convolution equation after the change of variables w = y − h, where
/// h collects the terms of ŷ whose x-exponent β fails α < β.
#[derive(Clone, Debug)]
pub struct CeSystem<S> {
    /// The removed head h.
    pub head: TruncatedSeries<S>,
    /// c̃ = F(x, ε, h) − ε^{α'}X_λ(h).
    pub forcing: TruncatedSeries<S>,
    /// Ã_I for |I| ≥ 1, the coefficients of w ↦ F(x, ε, h + w).
    pub coeffs: YPoly<S>,
    pub a0: Mat<S>,
    pub order: MonomialOrder,
    pub trunc: u32,
    n: usize,
}

/// Splits ŷ into the head h (x-part β with α ≮ β) and the remainder w.
pub fn split_head<S: Scalar>(y: &TruncatedSeries<S>, alpha_x: &[u32]) -> (TruncatedSeries<S>, TruncatedSeries<S>) {
    let n = alpha_x.len();
    let a = MultiIndex(alpha_x.to_vec());
    let strictly_above = |b: &MultiIndex| a.lt(&MultiIndex(b.0[..n].to_vec()));
    (y.filter(|b| !strictly_above(b)), y.filter(strictly_above))
}

fn x_free(b: &MultiIndex, n: usize) -> bool {
    b.0[..n].iter().all(|&e| e == 0)
}

impl<S: Scalar> CeSystem<S> {
    /// Builds the system for a given head h, truncated at joint degree T.
    pub fn new(p: &PdeProblem<S>, head: &TruncatedSeries<S>, trunc: u32) -> Result<Self> {
        let nz = p.normalize()?;
        if head.dim() != p.dim() || head.width() != p.big_n {
            return Err(Error::DimensionMismatch(head.dim(), p.dim()));
        }
        let head = head.truncate(trunc);
        let shifted = nz.f.shifted(&head, trunc)?;
        let zero_i = MultiIndex::zero(p.big_n);
        let f_at_h = shifted
            .coefficient(&zero_i)
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::new(p.dim(), p.big_n, trunc));
        let forcing = f_at_h.sub(&lhs_operator(&nz, p.n, &head)?.truncate(trunc))?;
        let mut coeffs = shifted;
        coeffs.terms.remove(&zero_i);
        Ok(CeSystem { head, forcing, coeffs, a0: nz.a0, order: nz.order, trunc, n: p.n })
    }

    /// The system attached to the formal solution ŷ_T.
    pub fn from_problem(p: &PdeProblem<S>, trunc: u32) -> Result<(Self, TruncatedSeries<S>)> {
        let nz = p.normalize()?;
        let y = solve_normalized(&nz, p.n, trunc)?;
        let (head, w) = split_head(&y, &p.alpha);
        Ok((Self::new(p, &head, trunc)?, w))
    }

    /// B̂(c̃), which is regular at the origin and vanishes at ξ = 0.
    pub fn borel_forcing(&self) -> Result<BorelSeries<S>> {
        formal_borel(&self.forcing, &self.order)
    }

    fn times_a0(&self, y: &BorelSeries<S>) -> Result<BorelSeries<S>> {
        let d = self.order.dim();
        let mut out = BorelSeries::zero(self.order.clone(), self.a0.n, y.trunc_order());
        for k in 0..self.a0.n {
            let col: Vec<S> = (0..self.a0.n).map(|i| self.a0.get(i, k).clone()).collect();
            let c = TruncatedSeries::from_terms(d, self.a0.n, y.trunc_order(), [(MultiIndex::zero(d), col)])?;
            out = out.add(&y.component(k).mul_inert(&c)?)?;
        }
        Ok(out)
    }

    /// (ξ^α η^{α'} I − A₀)Y.
    pub fn lhs(&self, y: &BorelSeries<S>) -> Result<BorelSeries<S>> {
        let shifted = BorelSeries {
            body: y.body.shift(self.order.alpha(), y.trunc_order()),
            offset: y.offset.clone(),
            order: y.order.clone(),
        };
        shifted.sub(&self.times_a0(y)?)
    }
}

/// Right side of the convolution equation at Y:
/// B(c̃) + Σ_I [B(Ã_I − Ã_I(0,η)) ∗ Y^{∗I} + Ã_I(0,η) Y^{∗I}] − A₀Y.
pub fn build_ce_rhs<S: Scalar>(ce: &CeSystem<S>, y: &BorelSeries<S>) -> Result<BorelSeries<S>> {
    if y.order != ce.order {
        return Err(Error::OrderMismatch);
    }
    if !y.has_standard_offset() {
        return Err(Error::InvalidInput("Y must carry the standard offset".into()));
    }
    let trunc = ce.trunc.min(y.trunc_order());
    let y = y.truncate(trunc);
    let n = ce.n;
    let mut rhs = ce.borel_forcing()?.truncate(trunc);
    let mut powers: BTreeMap<MultiIndex, BorelSeries<S>> = BTreeMap::new();
    for (i, a) in &ce.coeffs.terms {
        let yi = conv_power(&y, i, &mut powers)?;
        let moving = a.filter(|b| !x_free(b, n)).truncate(trunc);
        let frozen = a.filter(|b| x_free(b, n)).truncate(trunc);
        if !moving.is_zero() {
            rhs = rhs.add(&convolve(&formal_borel(&moving, &ce.order)?, &yi)?)?;
        }
        if !frozen.is_zero() {
            rhs = rhs.add(&yi.mul_inert(&frozen)?)?;
        }
    }
    rhs.sub(&ce.times_a0(&y)?)
}

fn conv_power<S: Scalar>(
    y: &BorelSeries<S>,
    i: &MultiIndex,
    memo: &mut BTreeMap<MultiIndex, BorelSeries<S>>,
) -> Result<BorelSeries<S>> {
    if let Some(p) = memo.get(i) {
        return Ok(p.clone());
    }
    let k = i
        .0
        .iter()
        .position(|&e| e > 0)
        .ok_or_else(|| Error::InvalidInput("Y^{∗0} has no Borel image".into()))?;
    let p = if i.degree() == 1 {
        y.component(k)
    } else {
        let mut parent = i.clone();
        parent.0[k] -= 1;
        convolve(&conv_power(y, &parent, memo)?, &y.component(k))?
    };
    memo.insert(i.clone(), p.clone());
    Ok(p)
}

/// Largest coefficient of (ξ^αη^{α'}I − A₀)Y − rhs(Y) at Y = B̂(ŷ_T − h),
/// over body degrees ≤ T.
pub fn ce_residual_formal<S: Scalar>(p: &PdeProblem<S>, trunc: u32) -> Result<f64> {
    let (ce, w) = CeSystem::from_problem(p, trunc)?;
    let y = formal_borel(&w, &ce.order)?;
    let lhs = ce.lhs(&y)?;
    let rhs = build_ce_rhs(&ce, &y)?;
    let res = lhs.sub(&rhs)?;
    Ok(res.body.iter().map(|(_, c)| c.iter().map(|x| x.modulus()).fold(0.0, f64::max)).fold(0.0, f64::max))
}
