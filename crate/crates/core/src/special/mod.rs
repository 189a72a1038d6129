//! Gamma and Mittag-Leffler functions on the real line.

mod gamma;
mod mittag_leffler;
pub(crate) mod quadrature;

pub use gamma::{gamma, ln_gamma, recip_gamma, sin_pi};
pub use mittag_leffler::{
    ml, ml_asymptotic, ml_series, mittag_leffler, rl_derivative_ml, MlQuery, MlResult, Regime,
    ASYMPTOTIC_RADIUS, DEFAULT_TOL, SERIES_RADIUS, TERM_CAP,
};
