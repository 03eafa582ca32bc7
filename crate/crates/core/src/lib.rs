//! Monomial Borel–Laplace summation of divergent multivariate power series.
//!
//! The crate is organized bottom-up: [`series`] holds truncated power series,
//! [`monomial`] the monomial decomposition and Gevrey diagnostics, [`borel`]
//! the formal transforms, [`pde`] the singularly perturbed problem class and
//! its formal solution, and [`summation`] the numeric Borel–Padé–Laplace sum.

pub mod borel;
pub mod error;
pub mod gamma;
pub mod monomial;
pub mod pde;
pub mod scalar;
pub mod series;
pub mod summation;

pub use borel::BorelSeries;
pub use error::{Error, Result};
pub use monomial::{GevreyFit, MonomialOrder};
pub use scalar::{ExactComplex, Scalar, Q};
pub use series::{MultiIndex, TruncatedSeries};
