use super::problem::{GTerm, PdeProblem};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Which component the coefficient a_j multiplies in the last slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompanionIndexing {
    /// a_j·y_{j−1}, the literal reading of F − a₁y₀ − ⋯ − a_{l−1}y_{l−1}.
    AsDisplayed,
    /// a_j·y_j, which encodes ε^{lα'}X^l y + Σ a_j ε^{jα'}X^j y = F.
    Shifted,
}

/// The first-order system of size lN for
/// ε^{lα'}X^l y + b_{l−1}ε^{(l−1)α'}X^{l−1}y + ⋯ + b₁ε^{α'}X y = G,
/// in the unknowns (y₀, …, y_{l−1}) = (y, ε^{α'}X_λ y, …).
///
/// The normalized right side is (y₁, …, y_{l−1}, F(y₀) − Σ a_j y_·) with
/// F = ⟨μ,α⟩^{−l}G and a_j = ⟨μ,α⟩^{j−l}b_j; the returned problem stores
/// ⟨μ,α⟩ times it, so that normalizing it gives back this system.
pub fn companion_system<S: Scalar>(
    p: &PdeProblem<S>,
    l: usize,
    b: &[S],
    indexing: CompanionIndexing,
) -> Result<PdeProblem<S>> {
    p.validate()?;
    if l < 2 {
        return Err(Error::InvalidInput("companion systems need l ≥ 2".into()));
    }
    if b.len() != l - 1 {
        return Err(Error::InvalidInput(format!("expected {} coefficients b_j, got {}", l - 1, b.len())));
    }
    let big_n = p.big_n;
    let size = l * big_n;
    let ma = S::from_q(p.mu_alpha());
    let ma_inv = ma.inv().ok_or_else(|| Error::InvalidInput("⟨μ,α⟩ vanishes".into()))?;
    let pow = |e: i64| -> S {
        let base = if e >= 0 { ma.clone() } else { ma_inv.clone() };
        (0..e.unsigned_abs()).fold(S::one(), |acc, _| acc * base.clone())
    };
    let unit_y = |slot: usize, r: usize| {
        let mut y = vec![0u32; size];
        y[slot * big_n + r] = 1;
        y
    };
    let coef_at = |row: usize, v: S| {
        let mut c = vec![S::zero(); size];
        c[row] = v;
        c
    };
    let (zx, ze) = (vec![0u32; p.n], vec![0u32; p.m]);
    let mut g = Vec::new();
    for slot in 0..l - 1 {
        for r in 0..big_n {
            g.push(GTerm { x: zx.clone(), eps: ze.clone(), y: unit_y(slot + 1, r), coef: coef_at(slot * big_n + r, ma.clone()) });
        }
    }
    let last = (l - 1) * big_n;
    let scale = pow(1 - l as i64);
    for t in &p.g {
        let mut y = vec![0u32; size];
        y[..big_n].copy_from_slice(&t.y);
        let mut coef = vec![S::zero(); size];
        for (r, c) in t.coef.iter().enumerate() {
            coef[last + r] = c.clone() * scale.clone();
        }
        g.push(GTerm { x: t.x.clone(), eps: t.eps.clone(), y, coef });
    }
    for (idx, bj) in b.iter().enumerate() {
        let j = idx + 1;
        if bj.is_zero() {
            continue;
        }
        let slot = match indexing {
            CompanionIndexing::AsDisplayed => j - 1,
            CompanionIndexing::Shifted => j,
        };
        let a = -(bj.clone() * pow(1 + j as i64 - l as i64));
        for r in 0..big_n {
            g.push(GTerm { x: zx.clone(), eps: ze.clone(), y: unit_y(slot, r), coef: coef_at(last + r, a.clone()) });
        }
    }
    Ok(PdeProblem { n: p.n, m: p.m, big_n: size, alpha: p.alpha.clone(), alpha_prime: p.alpha_prime.clone(), mu: p.mu.clone(), g })
}
