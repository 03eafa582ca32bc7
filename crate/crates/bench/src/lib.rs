//! Inputs shared by the benchmarks.

use monosum_core::pde::PdeProblem;
use monosum_core::{MonomialOrder, Scalar, Q};

pub const EULER: &str = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
    "G":{"terms":[{"x":[0],"eps":[0],"y":[1],"coef":[[1,0]]},{"x":[1],"eps":[0],"y":[0],"coef":[[-1,0]]}]}}"#;

pub const NONLINEAR: &str = r#"{"n":1,"m":1,"N":1,"alpha":[1],"alpha_prime":[1],"mu":[1],
    "G":{"terms":[{"x":[0],"eps":[0],"y":[1],"coef":[[1,0]]},{"x":[1],"eps":[0],"y":[0],"coef":[[-1,0]]},
    {"x":[0],"eps":[0],"y":[2],"coef":[[1,0]]}]}}"#;

pub fn problem<S: Scalar>(text: &str) -> PdeProblem<S> {
    PdeProblem::from_json(text).expect("bundled problem parses")
}

/// Balanced order on (x, ε) with α = (1, 1) and k = 1.
pub fn balanced() -> MonomialOrder {
    MonomialOrder::balanced(vec![1, 1], Q::from_integer(1)).expect("valid order")
}
