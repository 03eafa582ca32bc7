//! Monomial orders, the decomposition along a monomial, and Gevrey diagnostics.

mod decompose;
mod gevrey;
mod order;

pub use decompose::{approximate, factorial_shell_bounds, reassemble, t_decompose, ShellBounds};
pub use gevrey::{gevrey_fit, GevreyFit};
pub use order::MonomialOrder;
