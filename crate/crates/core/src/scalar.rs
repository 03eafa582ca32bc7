//! Coefficient fields: double-precision complex numbers and exact complex
//! rationals, behind one trait so every algorithm runs in both modes.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gamma;

/// Small rationals used for exponents, weights and offsets.
pub type Q = Ratio<i64>;

/// Complex number with arbitrary precision rational parts.
pub type ExactComplex = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_q(q: Q) -> Self;
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn modulus(&self) -> f64;
    fn inv(&self) -> Option<Self>;
    /// Γ at a rational argument. Exact fields only accept positive integers.
    fn gamma(arg: Q) -> Result<Self>;
    /// Real and imaginary parts rendered for CSV output.
    fn format_parts(&self) -> (String, String);
    fn parse_parts(re: &str, im: &str) -> Result<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(Q::from_integer(n))
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * i)
    }
}

fn check_gamma_arg(arg: Q) -> Result<()> {
    if *arg.denom() == 1 && *arg.numer() <= 0 {
        return Err(Error::GammaPole(arg.to_string()));
    }
    Ok(())
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_q(q: Q) -> Self {
        Complex64::new(q_to_f64(q), 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn gamma(arg: Q) -> Result<Self> {
        check_gamma_arg(arg)?;
        Ok(Complex64::new(gamma::gamma(q_to_f64(arg)), 0.0))
    }
    fn format_parts(&self) -> (String, String) {
        (fmt_f64(self.re), fmt_f64(self.im))
    }
    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(Complex64::new(parse_real(re)?, parse_real(im)?))
    }
}

impl Scalar for ExactComplex {
    const EXACT: bool = true;

    fn from_q(q: Q) -> Self {
        Complex::new(q_to_big(q), BigRational::zero())
    }
    fn from_c64(z: Complex64) -> Self {
        Complex::new(f64_to_big(z.re), f64_to_big(z.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Complex::inv(self))
        }
    }
    fn gamma(arg: Q) -> Result<Self> {
        check_gamma_arg(arg)?;
        if *arg.denom() != 1 {
            return Err(Error::InexactGamma(arg.to_string()));
        }
        let mut acc = BigInt::one();
        for m in 2..*arg.numer() {
            acc *= m;
        }
        Ok(Complex::new(BigRational::from_integer(acc), BigRational::zero()))
    }
    fn format_parts(&self) -> (String, String) {
        (self.re.to_string(), self.im.to_string())
    }
    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(Complex::new(parse_big(re)?, parse_big(im)?))
    }
}

/// Seventeen significant digits, enough to round-trip any double.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn q_to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

pub fn q_to_big(q: Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn f64_to_big(x: f64) -> BigRational {
    match rationalize(x) {
        Some(q) => q_to_big(q),
        None => BigRational::from_float(x).unwrap_or_else(BigRational::zero),
    }
}

/// Best rational approximation within `1e-12` relative, by continued
/// fractions. Returns `None` for non-finite input or when no fraction with
/// 64-bit terms is close enough.
pub fn rationalize(x: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let tol = 1e-12 * x.abs().max(1.0);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = (a * p1 + p0, a * q1 + q0);
        if p2.abs() > i64::MAX as i128 || q2 > i64::MAX as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if (p1 as f64 / q1 as f64 - x).abs() <= tol {
            return Some(Q::new(p1 as i64, q1 as i64));
        }
        let frac = r - a as f64;
        if frac == 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Parses `"p/q"`, an integer, or a decimal literal into a rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        let q: i64 = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        if q == 0 {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(Q::new(p, q));
    }
    let x: f64 = s.parse().map_err(|_| Error::Parse(s.to_string()))?;
    rationalize(x).ok_or_else(|| Error::Parse(format!("{s} is not close to a small rational")))
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.contains('/') {
        return Ok(q_to_f64(parse_q(s)?));
    }
    s.parse().map_err(|_| Error::Parse(s.to_string()))
}

fn parse_big(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(s.to_string()))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s}")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(BigRational::from_integer(n));
    }
    let x: f64 = s.parse().map_err(|_| Error::Parse(s.to_string()))?;
    Ok(f64_to_big(x))
}
