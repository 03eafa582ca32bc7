use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::matrix::Mat;
use crate::error::{Error, Result};
use crate::monomial::MonomialOrder;
use crate::scalar::{parse_q, Scalar, Q};
use crate::series::{MultiIndex, TruncatedSeries};

/// Truncation order used for exact polynomial data.
pub(crate) const POLY_TRUNC: u32 = 1 << 20;

/// One entry of the G table: coefficient vector of x^β ε^β' y^I.
#[derive(Clone, Debug, PartialEq)]
pub struct GTerm<S> {
    pub x: Vec<u32>,
    pub eps: Vec<u32>,
    pub y: Vec<u32>,
    pub coef: Vec<S>,
}

/// ε^{α'}·x^α(μ₁x₁∂₁ + ⋯ + μₙxₙ∂ₙ)y = G(x, ε, y) with y ∈ ℂ^N.
#[derive(Clone, Debug, PartialEq)]
pub struct PdeProblem<S> {
    pub n: usize,
    pub m: usize,
    pub big_n: usize,
    pub alpha: Vec<u32>,
    pub alpha_prime: Vec<u32>,
    pub mu: Vec<Q>,
    pub g: Vec<GTerm<S>>,
}

/// A polynomial in y whose coefficients are series in (x, ε):
/// Σ_I A_I(x, ε) y^I, each A_I with width N.
#[derive(Clone, Debug)]
pub struct YPoly<S> {
    pub dim: usize,
    pub big_n: usize,
    pub terms: BTreeMap<MultiIndex, TruncatedSeries<S>>,
}

fn binomial<S: Scalar>(n: u32, k: u32) -> S {
    let mut acc: i64 = 1;
    for i in 0..k as i64 {
        acc = acc * (n as i64 - i) / (i + 1);
    }
    S::from_i64(acc)
}

impl<S: Scalar> YPoly<S> {
    pub fn new(dim: usize, big_n: usize) -> Self {
        YPoly { dim, big_n, terms: BTreeMap::new() }
    }

    pub fn coefficient(&self, i: &MultiIndex) -> Option<&TruncatedSeries<S>> {
        self.terms.get(i)
    }

    fn add_coefficient(&mut self, i: MultiIndex, a: TruncatedSeries<S>) -> Result<()> {
        let entry = match self.terms.remove(&i) {
            Some(prev) => prev.add(&a)?,
            None => a,
        };
        if !entry.without_zeros().is_empty() {
            self.terms.insert(i, entry);
        }
        Ok(())
    }

    pub fn scale(&self, s: &S) -> Self {
        let terms = self.terms.iter().map(|(i, a)| (i.clone(), a.scale(s))).collect();
        YPoly { dim: self.dim, big_n: self.big_n, terms }
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let terms = self.terms.iter().map(|(i, a)| (i.clone(), a.truncate(trunc))).collect();
        YPoly { dim: self.dim, big_n: self.big_n, terms }
    }

    /// Keeps only the coefficient terms accepted by `keep`.
    pub fn filter_coefficients<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(i, a)| (i.clone(), a.filter(&keep)))
            .filter(|(_, a)| !a.without_zeros().is_empty())
            .collect();
        YPoly { dim: self.dim, big_n: self.big_n, terms }
    }

    /// Σ_I A_I y^I truncated at `trunc`.
    pub fn eval_series(&self, y: &TruncatedSeries<S>, trunc: u32) -> Result<TruncatedSeries<S>> {
        if y.width() != self.big_n {
            return Err(Error::ShapeMismatch(y.width(), self.big_n));
        }
        let mut powers = Powers::new(y, trunc);
        let mut out = TruncatedSeries::new(self.dim, self.big_n, trunc);
        for (i, a) in &self.terms {
            let p = powers.get(i)?;
            out = out.add(&a.truncate(trunc).mul(&p)?)?;
        }
        Ok(out)
    }

    /// The coefficients of w ↦ F(x, ε, h + w), truncated at `trunc`.
    pub fn shifted(&self, h: &TruncatedSeries<S>, trunc: u32) -> Result<Self> {
        let mut powers = Powers::new(h, trunc);
        let mut out = YPoly::new(self.dim, self.big_n);
        for (i, a) in &self.terms {
            let a = a.truncate(trunc);
            let upper = MultiIndex(i.0.iter().map(|e| e + 1).collect());
            for j in MultiIndex::boxed(&upper) {
                let rest = i.checked_sub(&j).expect("j ≤ i");
                let c = i.0.iter().zip(&j.0).fold(S::one(), |acc, (&n, &k)| acc * binomial::<S>(n, k));
                let term = a.mul(&powers.get(&rest)?)?.scale(&c);
                out.add_coefficient(j, term)?;
            }
        }
        Ok(out)
    }

    /// Constant terms of the linear coefficients, as the matrix ∂F/∂y(0).
    pub fn linear_matrix(&self) -> Mat<S> {
        let zero = MultiIndex::zero(self.dim);
        let cols: Vec<Vec<S>> = (0..self.big_n)
            .map(|k| match self.terms.get(&MultiIndex::unit(self.big_n, k)) {
                Some(a) => a.get(&zero).cloned().unwrap_or_else(|| vec![S::zero(); self.big_n]),
                None => vec![S::zero(); self.big_n],
            })
            .collect();
        Mat::from_columns(&cols)
    }

    pub fn max_y_degree(&self) -> u32 {
        self.terms.keys().map(|i| i.degree()).max().unwrap_or(0)
    }
}

/// Memoized monomials y^I of the components of a vector series.
pub(crate) struct Powers<S> {
    comps: Vec<TruncatedSeries<S>>,
    dim: usize,
    trunc: u32,
    memo: BTreeMap<MultiIndex, TruncatedSeries<S>>,
}

impl<S: Scalar> Powers<S> {
    pub(crate) fn new(y: &TruncatedSeries<S>, trunc: u32) -> Self {
        let comps = (0..y.width()).map(|k| y.component(k).truncate(trunc)).collect();
        Powers { comps, dim: y.dim(), trunc, memo: BTreeMap::new() }
    }

    pub(crate) fn get(&mut self, i: &MultiIndex) -> Result<TruncatedSeries<S>> {
        if let Some(p) = self.memo.get(i) {
            return Ok(p.clone());
        }
        let p = match i.0.iter().position(|&e| e > 0) {
            None => TruncatedSeries::monomial(self.dim, self.trunc, MultiIndex::zero(self.dim), S::one()),
            Some(k) => {
                let mut parent = i.clone();
                parent.0[k] -= 1;
                self.get(&parent)?.mul(&self.comps[k])?
            }
        };
        self.memo.insert(i.clone(), p.clone());
        Ok(p)
    }
}

/// The problem after division by ⟨μ,α⟩.
#[derive(Clone, Debug)]
pub struct Normalized<S> {
    /// F = G/⟨μ,α⟩ as a polynomial in y over the joint variables (x, ε).
    pub f: YPoly<S>,
    pub mu_alpha: Q,
    /// λ_j = μ_j/⟨μ,α⟩ on x.
    pub lambda: Vec<Q>,
    /// s_j = μ_jα_j/⟨μ,α⟩ on x.
    pub s: Vec<Q>,
    /// A₀ = ∂F/∂y(0,0,0).
    pub a0: Mat<S>,
    /// The order (α, α'), k = 1, weights (s, 0) on the joint variables.
    pub order: MonomialOrder,
}

impl<S: Scalar> PdeProblem<S> {
    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    /// ⟨μ,α⟩.
    pub fn mu_alpha(&self) -> Q {
        self.mu.iter().zip(&self.alpha).map(|(m, &a)| *m * Q::from_integer(a as i64)).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 || self.big_n == 0 {
            return Err(Error::InvalidInput("n, m and N must be positive".into()));
        }
        if self.alpha.len() != self.n || self.mu.len() != self.n {
            return Err(Error::InvalidInput(format!("alpha and mu need {} entries", self.n)));
        }
        if self.alpha_prime.len() != self.m {
            return Err(Error::InvalidInput(format!("alpha_prime needs {} entries", self.m)));
        }
        if self.alpha.iter().chain(&self.alpha_prime).any(|&a| a == 0) {
            return Err(Error::InvalidInput("exponents must be positive integers".into()));
        }
        if self.mu.iter().any(|m| *m <= Q::zero()) {
            return Err(Error::InvalidInput("mu must have positive entries".into()));
        }
        for t in &self.g {
            if t.x.len() != self.n || t.eps.len() != self.m || t.y.len() != self.big_n || t.coef.len() != self.big_n {
                return Err(Error::InvalidInput(format!("G term has wrong shape: {t:?}")));
            }
        }
        Ok(())
    }

    /// G as a polynomial in y over the joint variables.
    pub fn g_poly(&self) -> Result<YPoly<S>> {
        let d = self.dim();
        let mut p = YPoly::new(d, self.big_n);
        for t in &self.g {
            let mut beta = t.x.clone();
            beta.extend(&t.eps);
            let a = TruncatedSeries::from_terms(d, self.big_n, POLY_TRUNC, [(MultiIndex(beta), t.coef.clone())])?;
            p.add_coefficient(MultiIndex(t.y.clone()), a)?;
        }
        Ok(p)
    }

    /// B₀ = ∂G/∂y(0,0,0).
    pub fn b0(&self) -> Result<Mat<S>> {
        Ok(self.g_poly()?.linear_matrix())
    }

    pub fn order(&self) -> Result<MonomialOrder> {
        let ma = self.mu_alpha();
        let mut alpha = self.alpha.clone();
        alpha.extend(&self.alpha_prime);
        let mut s: Vec<Q> = self.mu.iter().zip(&self.alpha).map(|(m, &a)| *m * Q::from_integer(a as i64) / ma).collect();
        s.extend(std::iter::repeat_n(Q::zero(), self.m));
        MonomialOrder::new(alpha, Q::one(), s)
    }

    pub fn normalize(&self) -> Result<Normalized<S>> {
        self.validate()?;
        let ma = self.mu_alpha();
        if ma.is_zero() {
            return Err(Error::InvalidInput("⟨μ,α⟩ vanishes".into()));
        }
        let g = self.g_poly()?;
        if let Some(c) = g.coefficient(&MultiIndex::zero(self.big_n)) {
            if let Some(v) = c.get(&MultiIndex::zero(self.dim())) {
                if v.iter().any(|x| !x.is_zero()) {
                    return Err(Error::InvalidInput("G(0,0,0) must vanish".into()));
                }
            }
        }
        let inv = S::from_q(ma.recip());
        let f = g.scale(&inv);
        let a0 = f.linear_matrix();
        a0.inverse().map_err(|_| Error::Singular("B₀ = ∂G/∂y(0,0,0) is not invertible".into()))?;
        let lambda = self.mu.iter().map(|m| *m / ma).collect();
        let s = self.mu.iter().zip(&self.alpha).map(|(m, &a)| *m * Q::from_integer(a as i64) / ma).collect();
        Ok(Normalized { f, mu_alpha: ma, lambda, s, a0, order: self.order()? })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let uint = |key: &str| -> Result<usize> {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("missing or invalid `{key}`")))
        };
        let n = uint("n")?;
        let m = uint("m")?;
        let big_n = uint("N")?;
        let alpha = u32_list(v.get("alpha"), "alpha")?;
        let alpha_prime = u32_list(v.get("alpha_prime"), "alpha_prime")?;
        let mu = v
            .get("mu")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `mu`".into()))?
            .iter()
            .map(|x| parse_q(&value_text(x)?))
            .collect::<Result<Vec<_>>>()?;
        let terms = v
            .get("G")
            .and_then(|g| g.get("terms"))
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing `G.terms`".into()))?;
        let mut g = Vec::with_capacity(terms.len());
        for t in terms {
            let coef = t
                .get("coef")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term without `coef`".into()))?
                .iter()
                .map(|c| {
                    let pair = c.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        Error::Parse(format!("coefficient {c} is not a [re, im] pair"))
                    })?;
                    S::parse_parts(&value_text(&pair[0])?, &value_text(&pair[1])?)
                })
                .collect::<Result<Vec<S>>>()?;
            g.push(GTerm {
                x: u32_list(t.get("x"), "x")?,
                eps: u32_list(t.get("eps"), "eps")?,
                y: u32_list(t.get("y"), "y")?,
                coef,
            });
        }
        let p = PdeProblem { n, m, big_n, alpha, alpha_prime, mu, g };
        p.validate()?;
        Ok(p)
    }

    pub fn to_value(&self) -> Value {
        let q = |x: &Q| if x.is_integer() { json!(x.to_integer()) } else { json!(x.to_string()) };
        let terms: Vec<Value> = self
            .g
            .iter()
            .map(|t| {
                let coef: Vec<Value> = t
                    .coef
                    .iter()
                    .map(|c| {
                        let (re, im) = c.format_parts();
                        json!([number_or_text(&re), number_or_text(&im)])
                    })
                    .collect();
                json!({"x": t.x, "eps": t.eps, "y": t.y, "coef": coef})
            })
            .collect();
        json!({
            "n": self.n,
            "m": self.m,
            "N": self.big_n,
            "alpha": self.alpha,
            "alpha_prime": self.alpha_prime,
            "mu": self.mu.iter().map(q).collect::<Vec<_>>(),
            "G": {"terms": terms},
        })
    }
}

fn number_or_text(s: &str) -> Value {
    match s.parse::<i64>() {
        Ok(i) => json!(i),
        Err(_) => match s.parse::<f64>() {
            Ok(x) if !s.contains('/') => json!(x),
            _ => json!(s),
        },
    }
}

fn value_text(v: &Value) -> Result<String> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => Err(Error::Parse(format!("expected a number or a string, got {other}"))),
    }
}

fn u32_list(v: Option<&Value>, key: &str) -> Result<Vec<u32>> {
    v.and_then(Value::as_array)
        .ok_or_else(|| Error::Parse(format!("missing `{key}`")))?
        .iter()
        .map(|x| {
            x.as_u64()
                .and_then(|u| u32::try_from(u).ok())
                .ok_or_else(|| Error::Parse(format!("`{key}` entries must be non-negative integers")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;

    type E = ExactComplex;

    const EULER: &str = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
        "G":{"terms":[{"x":[0],"eps":[0],"y":[1],"coef":[[1,0]]},{"x":[1],"eps":[0],"y":[0],"coef":[[-1,0]]}]}}"#;

    #[test]
    fn parse_and_normalize() {
        let p = PdeProblem::<E>::from_json(EULER).unwrap();
        let nz = p.normalize().unwrap();
        assert_eq!(nz.mu_alpha, Q::one());
        assert_eq!(nz.s, vec![Q::one()]);
        assert_eq!(nz.a0.data, vec![E::one()]);
        let back = PdeProblem::<E>::from_value(&p.to_value()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn normalization_weights() {
        let mut p = PdeProblem::<E>::from_json(EULER).unwrap();
        p.mu = vec![Q::from_integer(2)];
        p.alpha = vec![3];
        let nz = p.normalize().unwrap();
        assert_eq!(nz.mu_alpha, Q::from_integer(6));
        assert_eq!(nz.s, vec![Q::one()]);
        assert_eq!(nz.a0.data, vec![E::from_q(Q::new(1, 6))]);

        let two = r#"{"n":2,"m":1,"N":1,"alpha":[1,1],"alpha_prime":[1],"mu":[1,1],
            "G":{"terms":[{"x":[0,0],"eps":[0],"y":[1],"coef":[[1,0]]}]}}"#;
        let nz = PdeProblem::<E>::from_json(two).unwrap().normalize().unwrap();
        assert_eq!(nz.mu_alpha, Q::from_integer(2));
        assert_eq!(nz.s, vec![Q::new(1, 2), Q::new(1, 2)]);
    }

    #[test]
    fn rejects_bad_problems() {
        assert!(matches!(PdeProblem::<E>::from_json("{"), Err(Error::Parse(_))));
        let singular = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
            "G":{"terms":[{"x":[1],"eps":[0],"y":[0],"coef":[[-1,0]]}]}}"#;
        let p = PdeProblem::<E>::from_json(singular).unwrap();
        assert!(matches!(p.normalize(), Err(Error::Singular(_))));
        let constant = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
            "G":{"terms":[{"x":[0],"eps":[0],"y":[0],"coef":[[1,0]]},{"x":[0],"eps":[0],"y":[1],"coef":[[1,0]]}]}}"#;
        let p = PdeProblem::<E>::from_json(constant).unwrap();
        assert!(matches!(p.normalize(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn taylor_shift() {
        // F(y) = y², shifted by h = x: (x + w)² = x² + 2x w + w²
        let mut f = YPoly::<E>::new(1, 1);
        f.add_coefficient(
            MultiIndex(vec![2]),
            TruncatedSeries::monomial(1, POLY_TRUNC, MultiIndex(vec![0]), E::one()),
        )
        .unwrap();
        let h = TruncatedSeries::monomial(1, 6, MultiIndex(vec![1]), E::one());
        let s = f.shifted(&h, 6).unwrap();
        assert_eq!(s.coefficient(&MultiIndex(vec![0])).unwrap().coeff(&[2], 0), E::one());
        assert_eq!(s.coefficient(&MultiIndex(vec![1])).unwrap().coeff(&[1], 0), E::from_i64(2));
        assert_eq!(s.coefficient(&MultiIndex(vec![2])).unwrap().coeff(&[0], 0), E::one());
    }
}
