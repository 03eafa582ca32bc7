use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::matrix::Mat;
use super::problem::{Normalized, PdeProblem, YPoly};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};
use crate::series::{outer, MultiIndex, TruncatedSeries};

type Shell<S> = Vec<(MultiIndex, Vec<S>)>;

/// The formal solution ŷ in the joint variables (x, ε), truncated at total
/// degree T.
#[derive(Clone, Debug)]
pub struct FormalSolution<S> {
    pub series: TruncatedSeries<S>,
    pub order: u32,
}

fn shells_of<S: Scalar>(f: &TruncatedSeries<S>, trunc: u32) -> Vec<Shell<S>> {
    let mut out: Vec<Shell<S>> = vec![Vec::new(); trunc as usize + 1];
    for (b, c) in f.iter() {
        let d = b.degree();
        if d <= trunc && c.iter().any(|x| !x.is_zero()) {
            out[d as usize].push((b.clone(), c.clone()));
        }
    }
    out
}

fn accumulate<S: Scalar>(a: &Shell<S>, b: &Shell<S>, acc: &mut HashMap<MultiIndex, Vec<S>>) {
    for (ba, ca) in a {
        for (bb, cb) in b {
            let prod = outer(ca, cb);
            match acc.get_mut(&ba.add(bb)) {
                Some(v) => {
                    for (x, p) in v.iter_mut().zip(prod) {
                        *x = x.clone() + p;
                    }
                }
                None => {
                    acc.insert(ba.add(bb), prod);
                }
            }
        }
    }
}

fn into_shell<S: Scalar>(acc: HashMap<MultiIndex, Vec<S>>) -> Shell<S> {
    let mut v: Shell<S> = acc.into_iter().filter(|(_, c)| c.iter().any(|x| !x.is_zero())).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// The unique ŷ with ε^{α'}X_λ(ŷ) = F(x, ε, ŷ) up to joint total degree T.
///
/// Each degree shell solves y_γ = A₀⁻¹([ε^{α'}X_λ ŷ]_γ − c_γ − known_γ), where
/// the known terms involve only lower shells. Powers ŷ^I are extended one
/// shell at a time.
pub fn formal_solve<S: Scalar>(p: &PdeProblem<S>, trunc: u32) -> Result<FormalSolution<S>> {
    let nz = p.normalize()?;
    let series = solve_normalized(&nz, p.n, trunc)?;
    Ok(FormalSolution { series, order: trunc })
}

pub(crate) fn solve_normalized<S: Scalar>(nz: &Normalized<S>, n: usize, trunc: u32) -> Result<TruncatedSeries<S>> {
    let d = nz.f.dim;
    let big_n = nz.f.big_n;
    let a0inv = nz.a0.inverse()?;
    let zero_i = MultiIndex::zero(big_n);
    let shift = nz.order.alpha().clone();
    let alpha_x: Vec<i64> = shift.0[..n].iter().map(|&a| a as i64).collect();

    let c_shells = match nz.f.coefficient(&zero_i) {
        Some(c) => shells_of(c, trunc),
        None => vec![Vec::new(); trunc as usize + 1],
    };
    let coeffs: Vec<(MultiIndex, Vec<Shell<S>>)> = nz
        .f
        .terms
        .iter()
        .filter(|(i, _)| !i.is_zero())
        .map(|(i, a)| (i.clone(), shells_of(a, trunc)))
        .collect();

    // every power needed, closed under removing the first non-zero exponent
    let mut needed: BTreeSet<MultiIndex> = BTreeSet::new();
    for (i, _) in &coeffs {
        let mut cur = i.clone();
        while cur.degree() >= 2 {
            needed.insert(cur.clone());
            let k = cur.0.iter().position(|&e| e > 0).expect("non-zero");
            cur.0[k] -= 1;
        }
    }
    let mut powers: HashMap<MultiIndex, Vec<Shell<S>>> =
        needed.iter().map(|i| (i.clone(), Vec::with_capacity(trunc as usize + 1))).collect();
    let mut comps: Vec<Vec<Shell<S>>> = vec![Vec::with_capacity(trunc as usize + 1); big_n];
    let mut solved: HashMap<MultiIndex, Vec<S>> = HashMap::new();
    let mut out = TruncatedSeries::new(d, big_n, trunc);

    for deg in 0..=trunc as usize {
        // powers of degree ≥ 2 in y only involve shells below `deg`
        for i in &needed {
            let k = i.0.iter().position(|&e| e > 0).expect("non-zero");
            let mut parent = i.clone();
            parent.0[k] -= 1;
            let mut acc = HashMap::new();
            for delta in 1..deg {
                let left = if parent.degree() == 1 {
                    let j = parent.0.iter().position(|&e| e > 0).expect("unit");
                    &comps[j][deg - delta]
                } else {
                    &powers[&parent][deg - delta]
                };
                accumulate(left, &comps[k][delta], &mut acc);
            }
            powers.get_mut(i).expect("allocated").push(into_shell(acc));
        }
        let mut known: HashMap<MultiIndex, Vec<S>> = c_shells[deg].iter().cloned().collect();
        for (i, a) in &coeffs {
            let linear = i.degree() == 1;
            let k = i.0.iter().position(|&e| e > 0).expect("non-zero");
            for e in 0..=deg {
                if linear && e == 0 {
                    continue;
                }
                let pw = if linear { comps[k].get(deg - e) } else { powers[i].get(deg - e) };
                if let Some(pw) = pw {
                    accumulate(&a[e], pw, &mut known);
                }
            }
        }
        let mut shell: Shell<S> = Vec::new();
        for gamma in MultiIndex::shell(d, deg as u32) {
            let mut r = vec![S::zero(); big_n];
            if let Some(prev) = gamma.checked_sub(&shift) {
                if let Some(yp) = solved.get(&prev) {
                    let w: Q = (0..n).map(|j| Q::from_integer(gamma.0[j] as i64 - alpha_x[j]) * nz.lambda[j]).sum();
                    if !w.is_zero() {
                        let w = S::from_q(w);
                        for (rk, yk) in r.iter_mut().zip(yp) {
                            *rk = rk.clone() + w.clone() * yk.clone();
                        }
                    }
                }
            }
            if let Some(kv) = known.get(&gamma) {
                for (rk, kk) in r.iter_mut().zip(kv) {
                    *rk = rk.clone() - kk.clone();
                }
            }
            if r.iter().all(|x| x.is_zero()) {
                continue;
            }
            let y = a0inv.mul_vec(&r);
            if y.iter().all(|x| x.is_zero()) {
                continue;
            }
            shell.push((gamma.clone(), y.clone()));
            solved.insert(gamma.clone(), y.clone());
            out.add_term(gamma, y);
        }
        for (k, comp) in comps.iter_mut().enumerate() {
            comp.push(shell.iter().map(|(b, c)| (b.clone(), vec![c[k].clone()])).collect());
        }
    }
    Ok(out)
}

/// ε^{α'}X_λ(y) − F(x, ε, y) truncated at the order of `y`.
pub fn pde_residual<S: Scalar>(p: &PdeProblem<S>, y: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let nz = p.normalize()?;
    let t = y.trunc_order();
    let lhs = lhs_operator(&nz, p.n, y)?.truncate(t);
    let rhs = nz.f.eval_series(y, t)?;
    lhs.sub(&rhs)
}

/// ε^{α'}X_λ(y) on the joint variables.
pub(crate) fn lhs_operator<S: Scalar>(nz: &Normalized<S>, n: usize, y: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let mut eps_shift = vec![0u32; nz.order.dim()];
    eps_shift[n..].copy_from_slice(&nz.order.alpha().0[n..]);
    let xy = y.apply_vector_field(&nz.order)?;
    let cap = xy.trunc_order() + eps_shift.iter().sum::<u32>();
    Ok(xy.shift(&MultiIndex(eps_shift), cap))
}

/// y₀(ε) with y₀(0) = 0 and F(0, ε, y₀(ε)) = 0 up to ε-order M, by Newton
/// iteration on truncated series.
pub fn solve_y0<S: Scalar>(p: &PdeProblem<S>, order: u32) -> Result<TruncatedSeries<S>> {
    let nz = p.normalize()?;
    let (n, m, big_n) = (p.n, p.m, p.big_n);
    // F(0, ε, y) as a polynomial over ε alone
    let mut f0 = YPoly::new(m, big_n);
    for (i, a) in &nz.f.terms {
        let mut r = TruncatedSeries::new(m, big_n, order);
        for (b, c) in a.iter() {
            if b.0[..n].iter().all(|&e| e == 0) {
                r.add_term(MultiIndex(b.0[n..].to_vec()), c.clone());
            }
        }
        if !r.without_zeros().is_empty() {
            f0.terms.insert(i.clone(), r);
        }
    }
    let mut y = TruncatedSeries::new(m, big_n, order);
    let max_iter = 2 * (32 - order.leading_zeros()) as usize + 8;
    for _ in 0..max_iter {
        let sh = f0.shifted(&y, order)?;
        let value = sh
            .coefficient(&MultiIndex::zero(big_n))
            .cloned()
            .unwrap_or_else(|| TruncatedSeries::new(m, big_n, order));
        let cols: Vec<TruncatedSeries<S>> = (0..big_n)
            .map(|k| {
                sh.coefficient(&MultiIndex::unit(big_n, k))
                    .cloned()
                    .unwrap_or_else(|| TruncatedSeries::new(m, big_n, order))
            })
            .collect();
        let step = solve_linear_series(&cols, &value, order)?;
        let size = step.max_abs();
        y = y.sub(&step)?;
        let done = if S::EXACT { size == 0.0 } else { size <= 1e-15 * (1.0 + y.max_abs()) };
        if done {
            return Ok(y.without_zeros());
        }
    }
    Err(Error::NonConvergence("Newton iteration for y₀(ε) did not settle".into()))
}

/// Solves J(ε)·δ = r for a matrix series J given by its columns, degree by
/// degree; J(0) must be invertible.
fn solve_linear_series<S: Scalar>(
    cols: &[TruncatedSeries<S>],
    rhs: &TruncatedSeries<S>,
    trunc: u32,
) -> Result<TruncatedSeries<S>> {
    let dim = rhs.dim();
    let big_n = cols.len();
    let zero = MultiIndex::zero(dim);
    let j0 = Mat::from_columns(
        &cols
            .iter()
            .map(|c| c.get(&zero).cloned().unwrap_or_else(|| vec![S::zero(); big_n]))
            .collect::<Vec<_>>(),
    );
    let inv = j0
        .inverse()
        .map_err(|_| Error::NonConvergence("∂F/∂y(0, ε, y₀) lost invertibility".into()))?;
    let mut out = TruncatedSeries::new(dim, big_n, trunc);
    let mut solved: HashMap<MultiIndex, Vec<S>> = HashMap::new();
    for deg in 0..=trunc {
        for gamma in MultiIndex::shell(dim, deg) {
            let mut r = rhs.get(&gamma).cloned().unwrap_or_else(|| vec![S::zero(); big_n]);
            for (k, col) in cols.iter().enumerate() {
                for (e, c) in col.iter() {
                    if e.is_zero() {
                        continue;
                    }
                    let Some(rest) = gamma.checked_sub(e) else { continue };
                    if let Some(prev) = solved.get(&rest) {
                        for (ri, ci) in r.iter_mut().zip(c) {
                            *ri = ri.clone() - ci.clone() * prev[k].clone();
                        }
                    }
                }
            }
            if r.iter().all(|x| x.is_zero()) {
                continue;
            }
            let v = inv.mul_vec(&r);
            solved.insert(gamma.clone(), v.clone());
            out.add_term(gamma, v);
        }
    }
    Ok(out)
}
