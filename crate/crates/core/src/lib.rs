//! Numerical and exact-symbolic tools for Dunkl harmonic analysis on R^d
//! with the sign-flip reflection groups Z2 (on the line) and Z2 x ... x Z2
//! (product case): kernel evaluation by two independent routes, the
//! intertwining operator and its dual, the Dunkl transform with inversion and
//! Plancherel checks, Dunkl translation and convolution, and a
//! hypoellipticity analyzer for convolution operators with polynomial
//! symbols.

// Tolerance gates are written `if !(value <= tol)` on purpose: a NaN or
// infinite error estimate must take the failure branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolve;
pub mod error;
pub mod hypo;
pub mod intertwine;
pub mod kernel;
pub mod polyalg;
pub mod transform;
pub mod foundation;

pub use error::{DunklError, Result};
