//! Numerical toolkit for the fractional Laplacian on the half-line: special
//! functions, closed-form constants, singular quadrature, Green and Poisson
//! kernels, Monte Carlo for killed stable processes and Hardy form checks.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose, and reference
// coefficients keep the digits they were published with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod constants;
pub mod error;
pub mod hardy;
pub mod kernels;
pub mod quad;
pub mod specfun;
pub mod stable_mc;

pub use error::{Error, Result};
