//! The singularly perturbed problem ε^{α'}X(y) = G(x, ε, y): formal solution,
//! convolution equation, singular directions and Nagumo norms.

mod ce;
mod companion;
mod directions;
mod matrix;
mod nagumo;
mod problem;
mod solve;

pub use ce::{build_ce_rhs, ce_residual_formal, split_head, CeSystem};
pub use companion::{companion_system, CompanionIndexing};
pub use directions::{eigenvalues, singular_directions, SingularDirectionSet};
pub use matrix::Mat;
pub use nagumo::{nagumo_checks, nagumo_norm, NagumoGrid, NagumoReport};
pub use problem::{GTerm, Normalized, PdeProblem, YPoly};
pub use solve::{formal_solve, pde_residual, solve_y0, FormalSolution};
