use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::{q_to_f64, Scalar, Q};
use crate::series::{MultiIndex, TruncatedSeries};

/// A series in the Borel plane, ξ^offset · body.
///
/// The body coefficient at β is the coefficient of ξ^{β+offset}. Transforms
/// produce offset −kα on J_s and 0 on inert variables, so body indices are
/// the exponents of the original series.
#[derive(Clone, Debug)]
pub struct BorelSeries<S> {
    pub body: TruncatedSeries<S>,
    pub offset: Vec<Q>,
    pub order: MonomialOrder,
}

impl<S: Scalar> BorelSeries<S> {
    /// The standard carrier for `order`: offset −kα_J.
    pub fn new(body: TruncatedSeries<S>, order: MonomialOrder) -> Result<Self> {
        if body.dim() != order.dim() {
            return Err(Error::DimensionMismatch(body.dim(), order.dim()));
        }
        let offset = order.k_alpha().into_iter().map(|q| -q).collect();
        Ok(BorelSeries { body, offset, order })
    }

    pub fn zero(order: MonomialOrder, width: usize, trunc: u32) -> Self {
        let d = order.dim();
        Self::new(TruncatedSeries::new(d, width, trunc), order).expect("dimensions agree")
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn width(&self) -> usize {
        self.body.width()
    }

    pub fn trunc_order(&self) -> u32 {
        self.body.trunc_order()
    }

    /// Whether the offset is the standard −kα_J.
    pub fn has_standard_offset(&self) -> bool {
        self.order.k_alpha().iter().zip(&self.offset).all(|(a, o)| *o == -*a)
    }

    /// The represented object as a map from (rational) exponent to coefficient.
    pub fn represented_terms(&self) -> BTreeMap<Vec<Q>, Vec<S>> {
        let mut out: BTreeMap<Vec<Q>, Vec<S>> = BTreeMap::new();
        for (b, c) in self.body.iter() {
            if c.iter().all(|x| x.is_zero()) {
                continue;
            }
            let e: Vec<Q> = b.as_q().iter().zip(&self.offset).map(|(x, o)| *x + *o).collect();
            out.insert(e, c.clone());
        }
        out
    }

    /// ξ^γ · self, recorded in the offset.
    pub fn times_monomial(&self, gamma: &[Q]) -> Self {
        let mut out = self.clone();
        for (o, g) in out.offset.iter_mut().zip(gamma) {
            *o += *g;
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch);
        }
        if self.offset != other.offset {
            return Err(Error::InvalidInput("Borel series carry different offsets".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(BorelSeries { body: self.body.add(&other.body)?, offset: self.offset.clone(), order: self.order.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(BorelSeries { body: self.body.sub(&other.body)?, offset: self.offset.clone(), order: self.order.clone() })
    }

    pub fn scale(&self, s: &S) -> Self {
        BorelSeries { body: self.body.scale(s), offset: self.offset.clone(), order: self.order.clone() }
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        BorelSeries { body: self.body.truncate(trunc), offset: self.offset.clone(), order: self.order.clone() }
    }

    /// Product with a series in the inert variables only, which the
    /// transforms treat as constants.
    pub fn mul_inert(&self, h: &TruncatedSeries<S>) -> Result<Self> {
        for (b, _) in h.iter() {
            if self.order.support().iter().any(|&j| b.0[j] != 0) {
                return Err(Error::InvalidInput(format!("factor has term {b} in an active variable")));
            }
        }
        Ok(BorelSeries { body: self.body.mul(h)?, offset: self.offset.clone(), order: self.order.clone() })
    }

    /// Component `k` as a scalar Borel series.
    pub fn component(&self, k: usize) -> Self {
        BorelSeries { body: self.body.component(k), offset: self.offset.clone(), order: self.order.clone() }
    }

    /// Largest coefficient modulus of the represented difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.represented_terms(), &other.represented_terms())
    }

    /// Evaluates ξ^offset·body at a point with all active coordinates non-zero,
    /// using principal branches for fractional powers.
    pub fn evaluate(&self, xi: &[Complex64]) -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); self.width()];
        for (e, c) in self.represented_terms() {
            let mono = e
                .iter()
                .zip(xi)
                .fold(Complex64::new(1.0, 0.0), |m, (q, x)| {
                    if q.is_zero() {
                        m
                    } else if q.is_integer() {
                        m * x.powi(q.to_integer() as i32)
                    } else {
                        m * x.powf(q_to_f64(*q))
                    }
                });
            for (a, ck) in acc.iter_mut().zip(&c) {
                *a += ck.to_c64() * mono;
            }
        }
        acc
    }

    /// The body as a series indexed by body exponents.
    pub fn body_index(&self, beta: &MultiIndex) -> Option<&Vec<S>> {
        self.body.get(beta)
    }
}

pub(crate) fn max_diff<S: Scalar>(a: &BTreeMap<Vec<Q>, Vec<S>>, b: &BTreeMap<Vec<Q>, Vec<S>>) -> f64 {
    let mut worst = 0.0f64;
    for k in a.keys().chain(b.keys()) {
        match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => {
                for (u, v) in x.iter().zip(y) {
                    worst = worst.max((u.clone() - v.clone()).modulus());
                }
            }
            (Some(x), None) | (None, Some(x)) => {
                for u in x {
                    worst = worst.max(u.modulus());
                }
            }
            (None, None) => {}
        }
    }
    worst
}
