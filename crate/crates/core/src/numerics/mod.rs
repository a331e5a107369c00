//! Special functions and quadrature kernels.
//!
//! Everything here works in the log domain where magnitudes can leave the
//! floating-point range: Gamma-type quantities are combined as logarithms and
//! exponentiated once at the end.

mod adaptive;
mod gamma;
mod laguerre;
mod tricomi;

pub use adaptive::{integrate_adaptive, AdaptiveResult};
pub use gamma::{binom, ln_binom, log_gamma, log_sum_exp, pochhammer_log};
pub use laguerre::{gauss_laguerre, QuadratureRule};
pub use tricomi::{tricomi_u, tricomi_u_ln};

pub(crate) use gamma::ln_gamma;

/// Relative accuracy requested from the special-function kernels.
pub const SPECIAL_FN_REL_TOL: f64 = 1e-10;

/// Relative tolerance of the rate quadrature's node-doubling loop.
pub const QUADRATURE_REL_TOL: f64 = 1e-10;

/// First node count tried by the Gauss-Laguerre rate evaluator.
pub const QUADRATURE_INITIAL_NODES: usize = 64;

/// Node cap of the Gauss-Laguerre rate evaluator.
pub const QUADRATURE_MAX_NODES: usize = 1024;

/// Subinterval budget for adaptive Gauss-Kronrod integration.
pub const ADAPTIVE_MAX_INTERVALS: usize = 4000;
