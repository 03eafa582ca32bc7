//! Numeric Borel summation along weighted rays and the weighted norms used
//! to bound Borel functions.

mod norms;
mod pade;
mod puiseux;
pub(crate) mod quadrature;
mod sum;

pub use norms::{c_mu_rho, exp_growth_fit, i_of_s, m0, norm_exponents, norm_mu, r_weight};
pub use pade::{pade_continue, robust_pade, PadeApproximant, RayContinuation, RayPole};
pub use puiseux::{ray_restrict, PuiseuxSeries, MAX_LAMBDA_DENOM};
pub use sum::{laplace_quadrature, monomial_borel_sum, SumOptions, SumResult};
