use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::Scalar;

/// Sparse multivariate power series truncated at total degree `trunc`.
///
/// Coefficients are vectors of a fixed `width` (1 for scalar series).
/// Keys absent from the map are zero; every stored key has degree ≤ `trunc`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries<S> {
    dim: usize,
    width: usize,
    trunc: u32,
    coeffs: BTreeMap<MultiIndex, Vec<S>>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(dim: usize, width: usize, trunc: u32) -> Self {
        TruncatedSeries { dim, width, trunc, coeffs: BTreeMap::new() }
    }

    /// Builds a series from `(exponent, coefficient vector)` pairs, summing
    /// repeated keys and dropping terms above the truncation order.
    pub fn from_terms<I>(dim: usize, width: usize, trunc: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Vec<S>)>,
    {
        let mut out = Self::new(dim, width, trunc);
        for (beta, c) in terms {
            if beta.dim() != dim {
                return Err(Error::DimensionMismatch(beta.dim(), dim));
            }
            if c.len() != width {
                return Err(Error::ShapeMismatch(c.len(), width));
            }
            out.add_term(beta, c);
        }
        out.prune();
        Ok(out)
    }

    /// Scalar series from `(exponents, coefficient)` pairs.
    pub fn scalar<I>(dim: usize, trunc: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, S)>,
    {
        let mut out = Self::new(dim, 1, trunc);
        for (beta, c) in terms {
            assert_eq!(beta.len(), dim, "exponent length");
            out.add_term(MultiIndex(beta), vec![c]);
        }
        out.prune();
        out
    }

    pub fn monomial(dim: usize, trunc: u32, beta: MultiIndex, c: S) -> Self {
        let mut out = Self::new(dim, 1, trunc);
        out.add_term(beta, vec![c]);
        out.prune();
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn trunc_order(&self) -> u32 {
        self.trunc
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// True when every stored coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.iter().all(|x| x.is_zero()))
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Vec<S>)> {
        self.coeffs.iter()
    }

    pub fn get(&self, beta: &MultiIndex) -> Option<&Vec<S>> {
        self.coeffs.get(beta)
    }

    /// Component `k` of the coefficient at `beta`, zero when absent.
    pub fn coeff(&self, beta: &[u32], k: usize) -> S {
        self.coeffs
            .get(&MultiIndex(beta.to_vec()))
            .map(|c| c[k].clone())
            .unwrap_or_else(S::zero)
    }

    /// Accumulates `c` into the coefficient of `beta`; ignored above `trunc`.
    pub fn add_term(&mut self, beta: MultiIndex, c: Vec<S>) {
        if beta.degree() > self.trunc {
            return;
        }
        match self.coeffs.get_mut(&beta) {
            Some(v) => {
                for (a, b) in v.iter_mut().zip(c) {
                    *a = a.clone() + b;
                }
            }
            None => {
                self.coeffs.insert(beta, c);
            }
        }
    }

    /// Drops coefficients that are exactly zero in numeric mode.
    fn prune(&mut self) {
        if !S::EXACT {
            self.coeffs.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        }
    }

    /// Same series with every exactly-zero coefficient removed, in either mode.
    pub fn without_zeros(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        out
    }

    /// Lowers the truncation order, dropping the terms above it.
    pub fn truncate(&self, trunc: u32) -> Self {
        let trunc = trunc.min(self.trunc);
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(b, _)| b.degree() <= trunc)
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect();
        TruncatedSeries { dim: self.dim, width: self.width, trunc, coeffs }
    }

    /// Replaces the truncation order, dropping terms above a lower one.
    pub fn with_trunc(&self, trunc: u32) -> Self {
        let mut out = self.truncate(trunc);
        out.trunc = trunc;
        out
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn filter<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(b, _)| keep(b))
            .map(|(b, c)| (b.clone(), c.clone()))
            .collect();
        TruncatedSeries { dim: self.dim, width: self.width, trunc: self.trunc, coeffs }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.width != other.width {
            return Err(Error::ShapeMismatch(self.width, other.width));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.truncate(other.trunc);
        for (b, c) in &other.coeffs {
            out.add_term(b.clone(), c.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = self.map(|c| c.clone() * s.clone());
        out.prune();
        out
    }

    /// Cauchy product truncated at min(T₁, T₂). Either both factors are
    /// scalar or one of them is.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let width = match (self.width, other.width) {
            (1, w) | (w, 1) => w,
            (a, b) => return Err(Error::ShapeMismatch(a, b)),
        };
        let trunc = self.trunc.min(other.trunc);
        let mut out = Self::new(self.dim, width, trunc);
        for (ba, ca) in &self.coeffs {
            let da = ba.degree();
            if da > trunc {
                break;
            }
            for (bb, cb) in &other.coeffs {
                if da + bb.degree() > trunc {
                    break;
                }
                out.add_term(ba.add(bb), outer(ca, cb));
            }
        }
        out.prune();
        Ok(out)
    }

    /// Multiplies by x^γ, keeping the result's exact range: the new order is
    /// `trunc + |γ|` capped at `cap`.
    pub fn shift(&self, gamma: &MultiIndex, cap: u32) -> Self {
        let trunc = (self.trunc + gamma.degree()).min(cap);
        let mut out = Self::new(self.dim, self.width, trunc);
        for (b, c) in &self.coeffs {
            out.add_term(b.add(gamma), c.clone());
        }
        out
    }

    /// f∘π_ij with π_ij placing x_i·x_j in slot j, so x^β ↦ x^β x_i^{β_j}.
    /// Indices are zero-based; terms above the truncation order are dropped.
    pub fn substitute_blowup(&self, i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidIndex(format!("blow-up needs i ≠ j, got {i}")));
        }
        if i >= self.dim || j >= self.dim {
            return Err(Error::InvalidIndex(format!("({i},{j}) out of range for d={}", self.dim)));
        }
        let mut out = Self::new(self.dim, self.width, self.trunc);
        for (b, c) in &self.coeffs {
            let mut e = b.clone();
            e.0[i] += b.0[j];
            out.add_term(e, c.clone());
        }
        Ok(out)
    }

    /// ∂^β f; the truncation order drops by |β|.
    pub fn derivative(&self, beta: &MultiIndex) -> Self {
        let drop = beta.degree();
        let trunc = self.trunc.saturating_sub(drop);
        let mut out = Self::new(self.dim, self.width, trunc);
        if drop > self.trunc {
            return out;
        }
        for (g, c) in &self.coeffs {
            let Some(rest) = g.checked_sub(beta) else { continue };
            let mut factor: i64 = 1;
            let mut big = S::one();
            for (&gj, &bj) in g.0.iter().zip(&beta.0) {
                for m in 0..bj {
                    let f = (gj - m) as i64;
                    match factor.checked_mul(f) {
                        Some(v) => factor = v,
                        None => {
                            big = big * S::from_i64(factor);
                            factor = f;
                        }
                    }
                }
            }
            let scale = big * S::from_i64(factor);
            out.add_term(rest, c.iter().map(|x| x.clone() * scale.clone()).collect());
        }
        out.prune();
        out
    }

    /// X_λ f with x^β ↦ ⟨β,λ⟩ x^{β+kα_J}. The result is exact through
    /// `trunc + |kα_J|`, which becomes its truncation order.
    pub fn apply_vector_field(&self, mo: &MonomialOrder) -> Result<Self> {
        if mo.dim() != self.dim {
            return Err(Error::DimensionMismatch(mo.dim(), self.dim));
        }
        let shift = mo.k_alpha_index()?;
        let lambda = mo.lambda();
        let mut out = Self::new(self.dim, self.width, self.trunc + shift.degree());
        for (b, c) in &self.coeffs {
            let w = b.dot(&lambda);
            if w.is_zero() {
                continue;
            }
            let w = S::from_q(w);
            out.add_term(b.add(&shift), c.iter().map(|x| x.clone() * w.clone()).collect());
        }
        out.prune();
        Ok(out)
    }

    /// Splits f = Σ_{0≤β<α} x^β f_β(x^α) and returns the pairs (β, f_β), with
    /// f_β a series in z_j = x_j^{α_j}, in lexicographic order of β.
    pub fn ramify(&self, alpha: &MultiIndex) -> Result<Vec<(MultiIndex, Self)>> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch(alpha.dim(), self.dim));
        }
        if alpha.0.contains(&0) {
            return Err(Error::InvalidIndex(format!("ramification needs α ≥ 1, got {alpha}")));
        }
        let mut parts: BTreeMap<Vec<u32>, Self> = MultiIndex::boxed(alpha)
            .into_iter()
            .map(|b| (b.0, Self::new(self.dim, self.width, self.trunc)))
            .collect();
        for (g, c) in &self.coeffs {
            let rem: Vec<u32> = g.0.iter().zip(&alpha.0).map(|(x, a)| x % a).collect();
            let quo: Vec<u32> = g.0.iter().zip(&alpha.0).map(|(x, a)| x / a).collect();
            parts
                .get_mut(&rem)
                .expect("remainder inside box")
                .add_term(MultiIndex(quo), c.clone());
        }
        Ok(parts.into_iter().map(|(b, s)| (MultiIndex(b), s)).collect())
    }

    /// Inverse of [`ramify`](Self::ramify).
    pub fn unramify(parts: &[(MultiIndex, Self)], alpha: &MultiIndex, trunc: u32) -> Self {
        let dim = alpha.dim();
        let width = parts.first().map(|p| p.1.width).unwrap_or(1);
        let mut out = Self::new(dim, width, trunc);
        for (beta, f) in parts {
            for (z, c) in &f.coeffs {
                let e = MultiIndex(
                    z.0.iter()
                        .zip(&alpha.0)
                        .zip(&beta.0)
                        .map(|((z, a), b)| z * a + b)
                        .collect(),
                );
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Component `k` as a scalar series.
    pub fn component(&self, k: usize) -> Self {
        let mut out = Self::new(self.dim, 1, self.trunc);
        for (b, c) in &self.coeffs {
            out.add_term(b.clone(), vec![c[k].clone()]);
        }
        out.prune();
        out
    }

    /// Stacks scalar series into one vector-valued series.
    pub fn from_components(parts: &[Self]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("no components".into()))?;
        let trunc = parts.iter().map(|p| p.trunc).min().unwrap_or(0);
        let width = parts.len();
        let mut out = Self::new(first.dim, width, trunc);
        for (k, p) in parts.iter().enumerate() {
            if p.dim != first.dim {
                return Err(Error::DimensionMismatch(p.dim, first.dim));
            }
            for (b, c) in &p.coeffs {
                let mut v = vec![S::zero(); width];
                v[k] = c[0].clone();
                out.add_term(b.clone(), v);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Applies `f` to every coefficient entry.
    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> TruncatedSeries<T> {
        TruncatedSeries {
            dim: self.dim,
            width: self.width,
            trunc: self.trunc,
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (b.clone(), c.iter().map(&f).collect()))
                .collect(),
        }
    }

    pub fn to_numeric(&self) -> TruncatedSeries<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// Evaluates the truncated polynomial at a point.
    pub fn evaluate(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut acc = vec![Complex64::zero(); self.width];
        for (b, c) in &self.coeffs {
            let mono = b
                .0
                .iter()
                .zip(x)
                .fold(Complex64::new(1.0, 0.0), |m, (&e, &xj)| m * xj.powu(e));
            for (a, ck) in acc.iter_mut().zip(c) {
                *a += ck.to_c64() * mono;
            }
        }
        acc
    }

    /// Largest coefficient modulus of `self − other` over both supports.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        let zero = vec![S::zero(); self.width.max(other.width)];
        for b in self.coeffs.keys().chain(other.coeffs.keys()) {
            let a = self.coeffs.get(b).unwrap_or(&zero);
            let c = other.coeffs.get(b).unwrap_or(&zero);
            for (x, y) in a.iter().zip(c) {
                worst = worst.max((x.clone() - y.clone()).modulus());
            }
        }
        worst
    }

    /// Exact coefficientwise equality, ignoring stored zeros.
    pub fn same_terms(&self, other: &Self) -> bool {
        self.without_zeros().coeffs == other.without_zeros().coeffs
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .values()
            .flat_map(|c| c.iter().map(|x| x.modulus()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn outer<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    if a.len() == 1 {
        b.iter().map(|y| a[0].clone() * y.clone()).collect()
    } else {
        a.iter().map(|x| x.clone() * b[0].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ExactComplex, Q};
    use proptest::prelude::*;

    type S = Complex64;
    type E = ExactComplex;

    fn c(x: f64) -> S {
        S::new(x, 0.0)
    }

    fn e(n: i64) -> E {
        E::from_i64(n)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    #[test]
    fn add_cancels_and_truncates() {
        let a = TruncatedSeries::scalar(1, 5, [(vec![0], c(1.0)), (vec![1], c(1.0))]);
        let b = TruncatedSeries::scalar(1, 5, [(vec![0], c(1.0)), (vec![1], c(-1.0))]);
        let s = a.add(&b).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coeff(&[0], 0), c(2.0));

        let zero = TruncatedSeries::new(1, 1, 5);
        assert!(a.add(&zero).unwrap().same_terms(&a));

        let x1 = TruncatedSeries::scalar(2, 3, [(vec![1, 0], c(1.0))]);
        let x2sq = TruncatedSeries::scalar(2, 2, [(vec![0, 2], c(1.0))]);
        let s = x1.add(&x2sq).unwrap();
        assert_eq!(s.trunc_order(), 2);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn add_rejects_mismatch() {
        let a = TruncatedSeries::<S>::new(1, 1, 3);
        let b = TruncatedSeries::<S>::new(2, 1, 3);
        assert!(matches!(a.add(&b), Err(Error::DimensionMismatch(1, 2))));
        let v = TruncatedSeries::<S>::new(1, 2, 3);
        assert!(matches!(a.add(&v), Err(Error::ShapeMismatch(1, 2))));
        let w = TruncatedSeries::<S>::new(1, 3, 3);
        assert!(matches!(v.mul(&w), Err(Error::ShapeMismatch(2, 3))));
    }

    #[test]
    fn products() {
        let a = TruncatedSeries::scalar(1, 5, [(vec![0], e(1)), (vec![1], e(1))]);
        let b = TruncatedSeries::scalar(1, 5, [(vec![0], e(1)), (vec![1], e(-1))]);
        let p = a.mul(&b).unwrap().without_zeros();
        let want = TruncatedSeries::scalar(1, 5, [(vec![0], e(1)), (vec![2], e(-1))]);
        assert!(p.same_terms(&want));

        let geo = TruncatedSeries::scalar(1, 5, (0..=5).map(|n| (vec![n], e(1))));
        let p = geo.mul(&b).unwrap();
        assert!(p.same_terms(&TruncatedSeries::scalar(1, 5, [(vec![0], e(1))])));

        let xy = TruncatedSeries::scalar(2, 4, [(vec![1, 1], e(1))]);
        let p = xy.mul(&xy).unwrap();
        assert!(p.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![2, 2], e(1))])));
    }

    #[test]
    fn blowup_examples() {
        let x2 = TruncatedSeries::scalar(2, 4, [(vec![0, 1], e(1))]);
        let r = x2.substitute_blowup(0, 1).unwrap();
        assert!(r.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![1, 1], e(1))])));

        let x1x2 = TruncatedSeries::scalar(2, 4, [(vec![1, 1], e(1))]);
        let r = x1x2.substitute_blowup(0, 1).unwrap();
        assert!(r.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![2, 1], e(1))])));

        // Σ n!(x1x2)^n ↦ Σ n! x1^{2n} x2^n, truncated by total degree
        let mut fact = 1i64;
        let mut f = Vec::new();
        let mut want = Vec::new();
        for n in 0..=4u32 {
            if n > 0 {
                fact *= n as i64;
            }
            f.push((vec![n, n], e(fact)));
            if 3 * n <= 8 {
                want.push((vec![2 * n, n], e(fact)));
            }
        }
        let f = TruncatedSeries::scalar(2, 8, f);
        let r = f.substitute_blowup(0, 1).unwrap();
        assert!(r.same_terms(&TruncatedSeries::scalar(2, 8, want)));
        assert!(f.substitute_blowup(1, 1).is_err());
    }

    #[test]
    fn derivatives() {
        let f = TruncatedSeries::scalar(2, 5, [(vec![2, 1], e(1))]);
        let d = f.derivative(&mi(&[1, 0]));
        assert!(d.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![1, 1], e(2))])));
        assert_eq!(d.trunc_order(), 4);

        let g = TruncatedSeries::scalar(2, 5, [(vec![1, 1], e(1))]);
        let d = g.derivative(&mi(&[1, 1]));
        assert!(d.same_terms(&TruncatedSeries::scalar(2, 3, [(vec![0, 0], e(1))])));

        let k = TruncatedSeries::scalar(2, 5, [(vec![0, 0], e(7))]);
        assert!(k.derivative(&mi(&[1, 0])).without_zeros().is_empty());
    }

    #[test]
    fn vector_field_examples() {
        let mo = MonomialOrder::new(vec![1], Q::from_integer(1), vec![Q::from_integer(1)]).unwrap();
        let f = TruncatedSeries::scalar(1, 6, [(vec![3], e(1))]);
        let x = f.apply_vector_field(&mo).unwrap();
        assert!(x.same_terms(&TruncatedSeries::scalar(1, 7, [(vec![4], e(3))])));

        let half = Q::new(1, 2);
        let mo2 = MonomialOrder::new(vec![1, 1], Q::from_integer(1), vec![half, half]).unwrap();
        let f = TruncatedSeries::scalar(2, 6, [(vec![1, 1], e(1))]);
        let x = f.apply_vector_field(&mo2).unwrap();
        assert!(x.same_terms(&TruncatedSeries::scalar(2, 8, [(vec![2, 2], e(1))])));

        let one = TruncatedSeries::scalar(2, 6, [(vec![0, 0], e(1))]);
        assert!(one.apply_vector_field(&mo2).unwrap().without_zeros().is_empty());

        let frac = MonomialOrder::new(vec![1], Q::new(1, 2), vec![Q::from_integer(1)]).unwrap();
        assert!(TruncatedSeries::scalar(1, 3, [(vec![1], e(1))])
            .apply_vector_field(&frac)
            .is_err());
    }

    #[test]
    fn ramify_examples() {
        let f = TruncatedSeries::scalar(1, 3, (0..=3).map(|n| (vec![n], e(1))));
        let parts = f.ramify(&mi(&[2])).unwrap();
        assert_eq!(parts.len(), 2);
        let want = TruncatedSeries::scalar(1, 3, [(vec![0], e(1)), (vec![1], e(1))]);
        assert!(parts[0].1.same_terms(&want) && parts[1].1.same_terms(&want));

        let id = f.ramify(&mi(&[1])).unwrap();
        assert_eq!(id.len(), 1);
        assert!(id[0].1.same_terms(&f));

        let g = TruncatedSeries::scalar(2, 4, [(vec![1, 0], e(1)), (vec![2, 1], e(1))]);
        let parts = g.ramify(&mi(&[2, 1])).unwrap();
        assert_eq!(parts[0].0, mi(&[0, 0]));
        assert!(parts[0].1.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![1, 1], e(1))])));
        assert_eq!(parts[1].0, mi(&[1, 0]));
        assert!(parts[1].1.same_terms(&TruncatedSeries::scalar(2, 4, [(vec![0, 0], e(1))])));
    }

    fn arb_series(d: usize, t: u32) -> impl Strategy<Value = TruncatedSeries<E>> {
        proptest::collection::vec(
            (proptest::collection::vec(0u32..=t, d), -20i64..=20),
            0..12,
        )
        .prop_map(move |terms| {
            TruncatedSeries::scalar(d, t, terms.into_iter().map(|(b, c)| (b, E::from_i64(c))))
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(2, 6), b in arb_series(2, 6), c in arb_series(2, 6)) {
            prop_assert!(a.add(&b).unwrap().same_terms(&b.add(&a).unwrap()));
            prop_assert!(a.mul(&b).unwrap().same_terms(&b.mul(&a).unwrap()));
            let l = a.mul(&b).unwrap().mul(&c).unwrap();
            let r = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert!(l.same_terms(&r));
            let l = a.add(&b).unwrap().add(&c).unwrap();
            let r = a.add(&b.add(&c).unwrap()).unwrap();
            prop_assert!(l.same_terms(&r));
        }

        #[test]
        fn blowup_composes(f in arb_series(3, 8)) {
            let twice = f.substitute_blowup(0, 2).unwrap().substitute_blowup(0, 2).unwrap();
            // π_ij∘π_ij sends x^β to x^β x_i^{2β_j}
            let mut direct = TruncatedSeries::new(3, 1, 8);
            for (b, c) in f.iter() {
                let mut e = b.clone();
                e.0[0] += 2 * b.0[2];
                direct.add_term(e, c.clone());
            }
            prop_assert!(twice.same_terms(&direct));
        }

        #[test]
        fn ramify_roundtrip(f in arb_series(2, 8), a1 in 1u32..4, a2 in 1u32..4) {
            let alpha = MultiIndex(vec![a1, a2]);
            let parts = f.ramify(&alpha).unwrap();
            let back = TruncatedSeries::unramify(&parts, &alpha, 8);
            prop_assert!(back.same_terms(&f));
        }

        #[test]
        fn vector_field_linear(f in arb_series(2, 6), g in arb_series(2, 6), a in -5i64..5, b in -5i64..5) {
            let mo = MonomialOrder::new(vec![1, 2], Q::from_integer(1), vec![Q::new(1, 3), Q::new(2, 3)]).unwrap();
            let (a, b) = (E::from_i64(a), E::from_i64(b));
            let lhs = f.scale(&a).add(&g.scale(&b)).unwrap().apply_vector_field(&mo).unwrap();
            let rhs = f.apply_vector_field(&mo).unwrap().scale(&a)
                .add(&g.apply_vector_field(&mo).unwrap().scale(&b)).unwrap();
            prop_assert!(lhs.same_terms(&rhs));
        }
    }
}
