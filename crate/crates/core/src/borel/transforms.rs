use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::series::max_diff;
use super::BorelSeries;
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::monomial::MonomialOrder;
use crate::scalar::{q_to_f64, Scalar, Q};
use crate::series::{outer, MultiIndex, TruncatedSeries};

/// Memoized Γ values; numeric mode switches to log Γ for large arguments.
pub(crate) struct GammaTable<S> {
    cache: HashMap<Q, S>,
}

const DIRECT_LIMIT: i64 = 60;

impl<S: Scalar> GammaTable<S> {
    pub(crate) fn new() -> Self {
        GammaTable { cache: HashMap::new() }
    }

    pub(crate) fn gamma(&mut self, arg: Q) -> Result<S> {
        if let Some(v) = self.cache.get(&arg) {
            return Ok(v.clone());
        }
        let v = S::gamma(arg)?;
        self.cache.insert(arg, v.clone());
        Ok(v)
    }

    pub(crate) fn inv_gamma(&mut self, arg: Q) -> Result<S> {
        let g = self.gamma(arg)?;
        g.inv().ok_or_else(|| Error::GammaPole(arg.to_string()))
    }

    /// Γ(a)Γ(b)/Γ(c).
    pub(crate) fn ratio(&mut self, a: Q, b: Q, c: Q) -> Result<S> {
        if S::EXACT || c < Q::from_integer(DIRECT_LIMIT) {
            let num = self.gamma(a)? * self.gamma(b)?;
            return Ok(num * self.inv_gamma(c)?);
        }
        let v = ln_gamma(q_to_f64(a)) + ln_gamma(q_to_f64(b)) - ln_gamma(q_to_f64(c));
        Ok(S::from_c64(Complex64::new(v.exp(), 0.0)))
    }
}

fn check_dim<S: Scalar>(f: &TruncatedSeries<S>, mo: &MonomialOrder) -> Result<()> {
    if f.dim() != mo.dim() {
        return Err(Error::DimensionMismatch(f.dim(), mo.dim()));
    }
    Ok(())
}

/// B̂(x^μ) = ξ^{μ−kα_J}/Γ(⟨μ,λ⟩), extended termwise.
pub fn formal_borel<S: Scalar>(f: &TruncatedSeries<S>, mo: &MonomialOrder) -> Result<BorelSeries<S>> {
    check_dim(f, mo)?;
    let lambda = mo.lambda();
    let mut table = GammaTable::<S>::new();
    let mut body = TruncatedSeries::new(f.dim(), f.width(), f.trunc_order());
    for (b, c) in f.iter() {
        let arg = b.dot(&lambda);
        if arg <= Q::zero() {
            return Err(Error::NotTransformable(format!("x^{b} has ⟨μ,λ⟩ = {arg} ≤ 0")));
        }
        let g = table.inv_gamma(arg)?;
        body.add_term(b.clone(), c.iter().map(|x| x.clone() * g.clone()).collect());
    }
    BorelSeries::new(body, mo.clone())
}

/// The inverse of [`formal_borel`]: multiply by Γ and shift back by kα_J.
pub fn formal_laplace<S: Scalar>(g: &BorelSeries<S>) -> Result<TruncatedSeries<S>> {
    let lambda = g.order.lambda();
    let ka = g.order.k_alpha();
    let shift: Vec<Q> = g.offset.iter().zip(&ka).map(|(o, a)| *o + *a).collect();
    let total: Q = shift.iter().copied().sum();
    let t = g.trunc_order() as i64;
    let trunc = if total.is_integer() { (t + total.to_integer()).max(0) as u32 } else { t as u32 };
    let mut table = GammaTable::<S>::new();
    let mut out = TruncatedSeries::new(g.dim(), g.width(), trunc);
    for (b, c) in g.body.iter() {
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        let mut e = Vec::with_capacity(b.dim());
        for (bj, sj) in b.0.iter().zip(&shift) {
            let q = Q::from_integer(*bj as i64) + *sj;
            if !q.is_integer() || q < Q::zero() {
                return Err(Error::NotTransformable(format!(
                    "body term {b} maps to exponent {q} outside ℕ"
                )));
            }
            e.push(q.to_integer() as u32);
        }
        let e = MultiIndex(e);
        let arg = e.dot(&lambda);
        if arg <= Q::zero() {
            return Err(Error::NotTransformable(format!("x^{e} has ⟨μ,λ⟩ = {arg} ≤ 0")));
        }
        let gm = table.gamma(arg)?;
        out.add_term(e, c.iter().map(|x| x.clone() * gm.clone()).collect());
    }
    Ok(out)
}

/// The monomial convolution: ξ^a ∗ ξ^b = Γ(⟨a,λ⟩+1)Γ(⟨b,λ⟩+1)/Γ(⟨a+b,λ⟩+2) ξ^{a+b+kα_J}.
///
/// Body indices add and the result offset is o_f + o_g + kα_J. The result is
/// truncated at the smaller body order.
pub fn convolve<S: Scalar>(f: &BorelSeries<S>, g: &BorelSeries<S>) -> Result<BorelSeries<S>> {
    if f.order != g.order {
        return Err(Error::OrderMismatch);
    }
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch(f.dim(), g.dim()));
    }
    let width = match (f.width(), g.width()) {
        (1, w) | (w, 1) => w,
        (a, b) => return Err(Error::ShapeMismatch(a, b)),
    };
    let lambda = f.order.lambda();
    let ka = f.order.k_alpha();
    let offset: Vec<Q> = (0..f.dim()).map(|j| f.offset[j] + g.offset[j] + ka[j]).collect();
    let lo_f = f.offset.iter().zip(&lambda).map(|(o, l)| *o * *l).sum::<Q>();
    let lo_g = g.offset.iter().zip(&lambda).map(|(o, l)| *o * *l).sum::<Q>();
    let trunc = f.trunc_order().min(g.trunc_order());
    let mut table = GammaTable::<S>::new();
    let mut body = TruncatedSeries::new(f.dim(), width, trunc);
    for (bf, cf) in f.body.iter() {
        let df = bf.degree();
        if df > trunc {
            break;
        }
        let a = bf.dot(&lambda) + lo_f + Q::one();
        for (bg, cg) in g.body.iter() {
            if df + bg.degree() > trunc {
                break;
            }
            let b = bg.dot(&lambda) + lo_g + Q::one();
            if a <= Q::zero() || b <= Q::zero() {
                return Err(Error::NotTransformable(format!(
                    "convolution of ξ-terms at body {bf} and {bg} diverges"
                )));
            }
            let w = table.ratio(a, b, a + b)?;
            let c = outer(cf, cg).into_iter().map(|x| x * w.clone()).collect();
            body.add_term(bf.add(bg), c);
        }
    }
    Ok(BorelSeries { body, offset, order: f.order.clone() })
}

/// Splits f into the head of terms with kα_J ≰ β_J, left untransformed, and
/// the Borel-transformable tail.
pub fn split_summand<S: Scalar>(
    f: &TruncatedSeries<S>,
    mo: &MonomialOrder,
) -> (TruncatedSeries<S>, TruncatedSeries<S>) {
    let ka = mo.k_alpha();
    let support = mo.support();
    let in_tail = |b: &MultiIndex| support.iter().all(|&j| Q::from_integer(b.0[j] as i64) >= ka[j]);
    (f.filter(|b| !in_tail(b)), f.filter(in_tail))
}

/// The offset gap o' − π(o) between the carrier of B̂_{λ'}(f∘π_ij) and the
/// blown-up carrier of B̂_λ(f). It vanishes unless the blow-up changes the
/// active set, in which case the two sides differ by the monomial ξ^gap.
pub fn blowup_offset_gap(mo: &MonomialOrder, i: usize, j: usize) -> Result<Vec<Q>> {
    let blown = mo.blowup(i, j)?;
    let mut o: Vec<Q> = mo.k_alpha().into_iter().map(|q| -q).collect();
    o[i] = o[i] + o[j];
    Ok(blown.k_alpha().iter().zip(&o).map(|(a, p)| -*a - *p).collect())
}

/// Largest coefficient discrepancy between B̂_λ(f)∘π_ij and B̂_{λ'}(f∘π_ij)
/// on the truncated support, after multiplying the former by ξ^gap (see
/// [`blowup_offset_gap`]). Indices are zero-based.
pub fn borel_blowup_commute_check<S: Scalar>(
    f: &TruncatedSeries<S>,
    mo: &MonomialOrder,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_dim(f, mo)?;
    let gap = blowup_offset_gap(mo, i, j)?;
    let blown = mo.blowup(i, j)?;
    let t = f.trunc_order();
    let kept = f.filter(|b| b.degree() + b.0[j] <= t);
    let lhs_src = formal_borel(&kept, mo)?;
    let mut lhs: BTreeMap<Vec<Q>, Vec<S>> = BTreeMap::new();
    for (mut r, c) in lhs_src.represented_terms() {
        r[i] = r[i] + r[j];
        for (x, g) in r.iter_mut().zip(&gap) {
            *x += *g;
        }
        lhs.insert(r, c);
    }
    let rhs = formal_borel(&f.substitute_blowup(i, j)?, &blown)?.represented_terms();
    Ok(max_diff(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::t_decompose;
    use crate::scalar::ExactComplex;
    use proptest::prelude::*;

    type E = ExactComplex;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn e(n: i64) -> E {
        E::from_i64(n)
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex(v.to_vec())
    }

    fn fact(n: i64) -> i64 {
        (1..=n).product()
    }

    fn balanced2() -> MonomialOrder {
        MonomialOrder::new(vec![1, 1], Q::one(), vec![q(1, 2), q(1, 2)]).unwrap()
    }

    fn euler_diag(t: u32) -> TruncatedSeries<E> {
        TruncatedSeries::scalar(2, 2 * t, (1..=t as i64).map(|n| (vec![n as u32, n as u32], e(fact(n)))))
    }

    #[test]
    fn borel_of_monomials() {
        let mo = balanced2();
        let f = TruncatedSeries::monomial(2, 6, mi(&[2, 2]), e(1));
        let b = formal_borel(&f, &mo).unwrap();
        let terms = b.represented_terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms.get(&vec![q(1, 1), q(1, 1)]).unwrap()[0], e(1));

        let mo = MonomialOrder::new(vec![1, 2], Q::one(), vec![q(1, 2), q(1, 2)]).unwrap();
        assert_eq!(mo.lambda(), vec![q(1, 2), q(1, 4)]);
        let f = TruncatedSeries::monomial(2, 6, mi(&[2, 4]), e(1));
        let terms = formal_borel(&f, &mo).unwrap().represented_terms();
        assert_eq!(terms.get(&vec![q(1, 1), q(2, 1)]).unwrap()[0], e(1));
    }

    #[test]
    fn borel_of_euler_diagonal() {
        let b = formal_borel(&euler_diag(10), &balanced2()).unwrap();
        let terms = b.represented_terms();
        assert_eq!(terms.len(), 10);
        for n in 1..=10i64 {
            let key = vec![q(n - 1, 1), q(n - 1, 1)];
            assert_eq!(terms.get(&key).unwrap()[0], e(n));
        }
        let back = formal_laplace(&b).unwrap();
        assert!(back.same_terms(&euler_diag(10)));
    }

    #[test]
    fn laplace_of_zero() {
        let z = BorelSeries::<E>::zero(balanced2(), 1, 5);
        assert!(formal_laplace(&z).unwrap().is_zero());
    }

    #[test]
    fn borel_rejects_poles() {
        let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![Q::one(), Q::zero()]).unwrap();
        let f = TruncatedSeries::monomial(2, 3, mi(&[0, 2]), e(1));
        assert!(matches!(formal_borel(&f, &mo), Err(Error::NotTransformable(_))));
    }

    #[test]
    fn laplace_rejects_fractional_exponents() {
        let mo = balanced2();
        let g = formal_borel(&TruncatedSeries::monomial(2, 4, mi(&[1, 1]), e(1)), &mo).unwrap();
        let shifted = g.times_monomial(&[q(1, 2), Q::zero()]);
        assert!(matches!(formal_laplace(&shifted), Err(Error::NotTransformable(_))));
    }

    #[test]
    fn monomial_convolution() {
        let mo = balanced2();
        // ξ₁ξ₂ ∗ ξ₁ξ₂ through carriers with body x^{(2,2)}
        let f = formal_borel(&TruncatedSeries::monomial(2, 8, mi(&[2, 2]), e(1)), &mo).unwrap();
        let c = convolve(&f, &f).unwrap();
        let terms = c.represented_terms();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms.get(&vec![q(3, 1), q(3, 1)]).unwrap()[0], E::from_q(q(1, 6)));

        let z = BorelSeries::<E>::zero(mo.clone(), 1, 8);
        assert!(convolve(&f, &z).unwrap().body.is_zero());

        let x = TruncatedSeries::monomial(2, 8, mi(&[1, 1]), e(1));
        let lhs = formal_borel(&x.mul(&x).unwrap(), &mo).unwrap();
        let bx = formal_borel(&x, &mo).unwrap();
        let rhs = convolve(&bx, &bx).unwrap();
        assert_eq!(lhs.max_abs_diff(&rhs), 0.0);
        assert_eq!(rhs.represented_terms().get(&vec![q(1, 1), q(1, 1)]).unwrap()[0], e(1));
    }

    #[test]
    fn convolution_against_beta_integral() {
        // (f∗g)(x) = x^{kα} ∫₀¹ f(xτ^λ) g(x(1−τ)^λ) dτ for f = g = x₁x₂ at a point
        let mo = balanced2();
        let f = formal_borel(&TruncatedSeries::monomial(2, 8, mi(&[2, 2]), Complex64::new(1.0, 0.0)), &mo)
            .unwrap();
        let c = convolve(&f, &f).unwrap();
        let x = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)];
        let n = 2000;
        let mut integral = Complex64::new(0.0, 0.0);
        for m in 0..n {
            let tau: f64 = (m as f64 + 0.5) / n as f64;
            let a = tau.powf(0.5);
            let b = (1.0 - tau).powf(0.5);
            integral += (x[0] * a) * (x[1] * a) * (x[0] * b) * (x[1] * b);
        }
        integral = integral * x[0] * x[1] / n as f64;
        assert!((c.evaluate(&x)[0] - integral).norm() < 1e-7);
    }

    #[test]
    fn convolution_checks_orders() {
        let a = BorelSeries::<E>::zero(balanced2(), 1, 3);
        let other = MonomialOrder::new(vec![1, 2], Q::one(), vec![q(1, 2), q(1, 2)]).unwrap();
        let b = BorelSeries::<E>::zero(other, 1, 3);
        assert_eq!(convolve(&a, &b).unwrap_err(), Error::OrderMismatch);
    }

    #[test]
    fn split_examples() {
        let mo = MonomialOrder::new(vec![1], Q::one(), vec![Q::one()]).unwrap();
        let f = TruncatedSeries::scalar(1, 4, [(vec![0], e(1)), (vec![1], e(1)), (vec![2], e(1))]);
        let (h, t) = split_summand(&f, &mo);
        assert!(h.same_terms(&TruncatedSeries::scalar(1, 4, [(vec![0], e(1))])));
        assert!(t.same_terms(&TruncatedSeries::scalar(1, 4, [(vec![1], e(1)), (vec![2], e(1))])));

        let f = TruncatedSeries::scalar(2, 4, [(vec![1, 0], e(1)), (vec![1, 1], e(1))]);
        let (h, t) = split_summand(&f, &balanced2());
        assert_eq!(h.len(), 1);
        assert!(h.get(&mi(&[1, 0])).is_some());
        assert!(t.get(&mi(&[1, 1])).is_some());

        let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![Q::one(), Q::zero()]).unwrap();
        let f = TruncatedSeries::scalar(2, 4, [(vec![0, 1], e(1)), (vec![1, 1], e(1))]);
        let (h, t) = split_summand(&f, &mo);
        assert!(h.get(&mi(&[0, 1])).is_some() && h.len() == 1);
        assert!(t.get(&mi(&[1, 1])).is_some() && t.len() == 1);
    }

    #[test]
    fn fractional_thresholds() {
        let mo = MonomialOrder::new(vec![1, 1], q(3, 2), vec![q(1, 2), q(1, 2)]).unwrap();
        let f = TruncatedSeries::scalar(2, 6, [(vec![1, 2], e(1)), (vec![2, 2], e(1))]);
        let (h, t) = split_summand(&f, &mo);
        assert!(h.get(&mi(&[1, 2])).is_some());
        assert!(t.get(&mi(&[2, 2])).is_some());
        let g = formal_borel(&t.to_numeric(), &mo).unwrap();
        assert_eq!(g.offset, vec![q(-3, 2), q(-3, 2)]);
        let back = formal_laplace(&g).unwrap();
        assert!(back.max_abs_diff(&t.to_numeric()) < 1e-14);
    }

    #[test]
    fn blowup_identity_examples() {
        let mo = balanced2();
        for beta in [[1u32, 1], [2, 1], [1, 3], [4, 2]] {
            let f = TruncatedSeries::monomial(2, 12, mi(&beta), Complex64::new(1.0, 0.0));
            assert_eq!(borel_blowup_commute_check(&f, &mo, 0, 1).unwrap(), 0.0);
        }
        assert_eq!(borel_blowup_commute_check(&euler_diag(8), &mo, 0, 1).unwrap(), 0.0);
        let z = TruncatedSeries::<E>::new(2, 1, 6);
        assert_eq!(borel_blowup_commute_check(&z, &mo, 0, 1).unwrap(), 0.0);
    }

    #[test]
    fn blowup_requires_admissibility() {
        let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![q(2, 3), q(1, 3)]).unwrap();
        let f = TruncatedSeries::monomial(2, 6, mi(&[2, 2]), e(1));
        assert!(matches!(borel_blowup_commute_check(&f, &mo, 0, 1), Err(Error::NotAdmissible(_))));
        assert!(borel_blowup_commute_check(&f, &mo, 1, 0).is_ok());
    }

    #[test]
    fn blowup_gap_in_degenerate_charts() {
        // balanced weights: λ'_j = 0 after π₁₂, so x₂ turns inert
        let gap = blowup_offset_gap(&balanced2(), 0, 1).unwrap();
        assert_eq!(gap, vec![Q::zero(), Q::one()]);
        let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![q(1, 3), q(2, 3)]).unwrap();
        assert_eq!(blowup_offset_gap(&mo, 0, 1).unwrap(), vec![Q::zero(), Q::zero()]);
        let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![Q::zero(), Q::one()]).unwrap();
        assert_eq!(blowup_offset_gap(&mo, 0, 1).unwrap(), vec![Q::one(), Q::zero()]);
    }

    #[test]
    fn derivation_identity() {
        // B(X f) = ξ^{kα} B(f)
        let mo = MonomialOrder::new(vec![1, 2], Q::one(), vec![Q::one(), Q::zero()]).unwrap();
        let ka = mo.k_alpha();
        let f: TruncatedSeries<E> = TruncatedSeries::scalar(
            2,
            8,
            [(vec![1, 1], e(3)), (vec![2, 1], e(-2)), (vec![1, 4], e(5)), (vec![3, 3], e(1))],
        );
        let lhs = formal_borel(&f.apply_vector_field(&mo).unwrap(), &mo).unwrap();
        let rhs = formal_borel(&f, &mo).unwrap().times_monomial(&ka);
        assert_eq!(max_diff(&lhs.represented_terms(), &rhs.represented_terms()), 0.0);
    }

    fn arb_tail(t: u32) -> impl Strategy<Value = TruncatedSeries<E>> {
        prop::collection::vec((1u32..5, 1u32..5, -20i64..20), 0..8).prop_map(move |terms| {
            TruncatedSeries::scalar(2, t, terms.into_iter().map(|(a, b, c)| (vec![a, b], e(c))))
        })
    }

    fn integer_order() -> MonomialOrder {
        MonomialOrder::from_lambda(vec![1, 1], vec![Q::one(), Q::one()]).unwrap()
    }

    proptest! {
        #[test]
        fn inverse_pair_exact(f in arb_tail(10)) {
            let mo = integer_order();
            let back = formal_laplace(&formal_borel(&f, &mo).unwrap()).unwrap();
            prop_assert!(back.same_terms(&f));
        }

        #[test]
        fn inverse_pair_numeric(f in arb_tail(10), s1 in 1i64..10) {
            let mo = MonomialOrder::new(vec![1, 2], q(1, 3), vec![q(s1, 10), q(10 - s1, 10)]).unwrap();
            let (_, tail) = split_summand(&f.to_numeric(), &mo);
            let back = formal_laplace(&formal_borel(&tail, &mo).unwrap()).unwrap();
            for (b, c) in tail.iter() {
                let r = back.coeff(&b.0, 0);
                prop_assert!((r - c[0]).norm() <= 1e-12 * c[0].norm());
            }
        }

        #[test]
        fn convolution_laws(a in arb_tail(8), b in arb_tail(8), c in arb_tail(8), u in -4i64..4) {
            let mo = integer_order();
            let (fa, fb, fc) = (
                formal_borel(&a, &mo).unwrap(),
                formal_borel(&b, &mo).unwrap(),
                formal_borel(&c, &mo).unwrap(),
            );
            let ab = convolve(&fa, &fb).unwrap();
            prop_assert_eq!(ab.max_abs_diff(&convolve(&fb, &fa).unwrap()), 0.0);
            let l = convolve(&ab, &fc).unwrap();
            let r = convolve(&fa, &convolve(&fb, &fc).unwrap()).unwrap();
            prop_assert_eq!(l.max_abs_diff(&r), 0.0);
            let lin = convolve(&fa.scale(&e(u)).add(&fc).unwrap(), &fb).unwrap();
            let sep = ab.scale(&e(u)).add(&convolve(&fc, &fb).unwrap()).unwrap();
            prop_assert_eq!(lin.max_abs_diff(&sep), 0.0);
        }

        #[test]
        fn morphism(a in arb_tail(8), b in arb_tail(8)) {
            let mo = integer_order();
            let conv = convolve(&formal_borel(&a, &mo).unwrap(), &formal_borel(&b, &mo).unwrap()).unwrap();
            let prod = formal_laplace(&conv).unwrap();
            prop_assert!(prod.same_terms(&a.mul(&b).unwrap()));
            prop_assert!(formal_borel(&a.mul(&b).unwrap(), &mo).unwrap().max_abs_diff(&conv) == 0.0);
        }

        #[test]
        fn ramification_invariance(f in arb_tail(10), n in 1u32..4, s1 in 1i64..4) {
            let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![q(s1, 4), q(4 - s1, 4)]).unwrap();
            let ram = mo.ramified(n).unwrap();
            prop_assert_eq!(mo.lambda(), ram.lambda());
            let f = f.to_numeric();
            let a = formal_borel(&f, &mo).unwrap();
            let b = formal_borel(&f, &ram).unwrap();
            prop_assert_eq!(a.body.max_abs_diff(&b.body), 0.0);
            prop_assert_eq!(a.offset, b.offset);
        }

        #[test]
        fn blowup_identity_random(f in arb_tail(10), s1 in 1i64..5) {
            let mo = MonomialOrder::new(vec![1, 1], Q::one(), vec![q(s1, 10), q(10 - s1, 10)]).unwrap();
            let d = borel_blowup_commute_check(&f.to_numeric(), &mo, 0, 1).unwrap();
            prop_assert!(d <= 1e-12);
        }

        #[test]
        fn component_relation(f in arb_tail(12)) {
            // for n ≥ k the body of B(x^{nα} f_{α,n}) equals x^{nα} φ_{α,n}
            let mo = MonomialOrder::from_lambda(vec![1, 1], vec![Q::one(), Q::one()]).unwrap();
            let alpha = mo.alpha().clone();
            let parts = t_decompose(&f, &alpha).unwrap();
            let phi = t_decompose(&formal_borel(&f, &mo).unwrap().body, &alpha).unwrap();
            for n in 1..parts.len() {
                let shifted = parts[n].shift(&alpha.scale(n as u32), f.trunc_order());
                let lhs = formal_borel(&shifted, &mo).unwrap().body;
                let rhs = phi[n].shift(&alpha.scale(n as u32), f.trunc_order());
                prop_assert!(lhs.same_terms(&rhs));
            }
        }
    }
}
