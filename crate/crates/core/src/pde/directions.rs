use std::f64::consts::TAU;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::matrix::Mat;
use super::problem::PdeProblem;
use crate::error::{Error, Result};
use crate::scalar::{q_to_f64, Scalar};

const DEDUP_TOL: f64 = 1e-10;

/// Eigenvalues ν_j of B₀ and the directions arg(ν_j/⟨μ,α⟩) in [0, 2π).
#[derive(Clone, Debug, PartialEq)]
pub struct SingularDirectionSet {
    pub eigenvalues: Vec<Complex64>,
    pub directions: Vec<f64>,
}

/// Parlett–Reinsch balancing by powers of two; leaves the spectrum intact.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let c: f64 = (0..n).filter(|&j| j != i).map(|j| m[(j, i)].norm()).sum();
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].norm()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let (mut cc, mut rr) = (c, r);
            while cc < rr / 2.0 {
                cc *= 2.0;
                rr /= 2.0;
                f *= 2.0;
            }
            while cc >= rr * 2.0 {
                cc /= 2.0;
                rr *= 2.0;
                f /= 2.0;
            }
            if (c + r) * 0.95 > cc + rr {
                converged = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a dense complex matrix via balancing and a Schur
/// decomposition.
pub fn eigenvalues(m: &Mat<Complex64>) -> Result<Vec<Complex64>> {
    let mut a = DMatrix::from_row_slice(m.n, m.n, &m.data);
    balance(&mut a);
    let schur = Schur::try_new(a, 1e-15, 100_000)
        .ok_or_else(|| Error::NonConvergence("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::NonConvergence("Schur form is not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

fn wrap(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if TAU - t < DEDUP_TOL {
        0.0
    } else {
        t
    }
}

pub fn singular_directions<S: Scalar>(p: &PdeProblem<S>) -> Result<SingularDirectionSet> {
    p.validate()?;
    let b0 = p.b0()?;
    let num = Mat { n: b0.n, data: b0.data.iter().map(|x| x.to_c64()).collect() };
    let norm = num.data.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let eig = eigenvalues(&num)?;
    if norm == 0.0 || eig.iter().any(|v| v.norm() <= 1e-12 * norm) {
        return Err(Error::Singular("B₀ has a zero eigenvalue".into()));
    }
    let ma = q_to_f64(p.mu_alpha());
    let mut dirs: Vec<f64> = eig.iter().map(|v| wrap((v / ma).arg())).collect();
    dirs.sort_by(f64::total_cmp);
    let mut directions: Vec<f64> = Vec::new();
    for d in dirs {
        if directions.last().is_none_or(|&l| d - l > DEDUP_TOL) {
            directions.push(d);
        }
    }
    if directions.len() > 1 && directions[0] + TAU - directions[directions.len() - 1] <= DEDUP_TOL {
        directions.pop();
    }
    Ok(SingularDirectionSet { eigenvalues: eig, directions })
}
