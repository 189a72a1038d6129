//! Numerics for the fractional logistic equation.
//!
//! The crate evaluates the West function
//!
//! ```text
//! w(t) = Σ_{n≥0} aⁿ E_β(−n t^β),   a = (u0 − 1)/u0,
//! ```
//!
//! together with the pieces needed to check which integro-differential
//! equation it satisfies: Mittag-Leffler evaluation with error bounds
//! ([`special`]), the classical logistic series and the large-time
//! expansions ([`logistic`]), a fractional Adams predictor-corrector and an
//! L1 Caputo differintegral ([`fde`]), residual checks and order estimation
//! ([`mfle`]), and Monte Carlo sampling of the inverse stable subordinator
//! ([`stochastic`]).
//!
//! All routines take the logistic rate `k = 1`; other rates follow from the
//! rescaling `w_k(t) = w_1(k t)`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN. Quadrature nodes and
// reference values keep all the digits they were published or computed with.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod error;
pub mod fde;
pub mod logistic;
pub mod mfle;
pub mod special;
pub mod stochastic;

pub use error::{Error, Result};
