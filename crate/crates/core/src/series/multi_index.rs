use std::cmp::Ordering;
use std::fmt;

use num_traits::Zero;

use crate::scalar::Q;

/// Exponent tuple β ∈ ℕ^d.
///
/// Ordered by total degree first, then lexicographically, so iterating a
/// sorted map visits degree shells in increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(d: usize) -> Self {
        MultiIndex(vec![0; d])
    }

    pub fn unit(d: usize, j: usize) -> Self {
        let mut v = vec![0; d];
        v[j] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    /// Componentwise β ≤ other.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Strict order of the partial order: β ≤ other and β ≠ other.
    pub fn lt(&self, other: &Self) -> bool {
        self.le(other) && self != other
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// self − other when other ≤ self.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn scale(&self, n: u32) -> Self {
        MultiIndex(self.0.iter().map(|a| a * n).collect())
    }

    /// ⟨β, w⟩ for a rational weight vector.
    pub fn dot(&self, w: &[Q]) -> Q {
        self.0
            .iter()
            .zip(w)
            .fold(Q::zero(), |acc, (&b, &l)| acc + l * Q::from_integer(b as i64))
    }

    pub fn as_q(&self) -> Vec<Q> {
        self.0.iter().map(|&b| Q::from_integer(b as i64)).collect()
    }

    /// Lexicographic comparison ignoring degree.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// All indices with |β| = degree in `d` variables, lexicographically descending.
    pub fn shell(d: usize, degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; d];
        fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for b in (0..=left).rev() {
                cur[pos] = b;
                rec(pos + 1, left - b, cur, out);
            }
        }
        if d == 0 {
            if degree == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(0, degree, &mut cur, &mut out);
        out
    }

    /// Every β with 0 ≤ β < bound componentwise, in lexicographic order.
    pub fn boxed(bound: &MultiIndex) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::new())];
        for &b in &bound.0 {
            out = out
                .into_iter()
                .flat_map(|m| {
                    (0..b).map(move |v| {
                        let mut e = m.0.clone();
                        e.push(v);
                        MultiIndex(e)
                    })
                })
                .collect();
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}
