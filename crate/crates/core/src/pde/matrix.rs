use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Small dense square matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![S::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    /// Builds the matrix from its columns.
    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.data[i * n + j] = v.clone();
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(S::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat { n: self.n, data: self.data.iter().map(|x| x.clone() * s.clone()).collect() }
    }

    /// Gauss–Jordan inverse with pivoting on the largest modulus.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.data.iter().map(|x| x.modulus()).fold(0.0, f64::max);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a.get(r, col).modulus().total_cmp(&a.get(s, col).modulus()))
                .expect("non-empty range");
            let pm = a.get(pivot, col).modulus();
            let singular = if S::EXACT { a.get(pivot, col).is_zero() } else { pm <= 1e-13 * scale };
            if singular {
                return Err(Error::Singular(format!("matrix of size {n} is not invertible")));
            }
            for j in 0..n {
                a.data.swap(col * n + j, pivot * n + j);
                inv.data.swap(col * n + j, pivot * n + j);
            }
            let p = a.get(col, col).inv().expect("non-zero pivot");
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].clone() * p.clone();
                inv.data[col * n + j] = inv.data[col * n + j].clone() * p.clone();
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let da = a.data[col * n + j].clone() * f.clone();
                    let di = inv.data[col * n + j].clone() * f.clone();
                    a.data[r * n + j] = a.data[r * n + j].clone() - da;
                    inv.data[r * n + j] = inv.data[r * n + j].clone() - di;
                }
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactComplex;

    #[test]
    fn inverse_exact() {
        let e = |n: i64| ExactComplex::from_i64(n);
        let m = Mat { n: 2, data: vec![e(0), e(1), e(-1), e(0)] };
        let inv = m.inverse().unwrap();
        assert_eq!(inv.data, vec![e(0), e(-1), e(1), e(0)]);
        let s = Mat { n: 2, data: vec![e(1), e(2), e(2), e(4)] };
        assert!(matches!(s.inverse(), Err(Error::Singular(_))));
    }
}
