//! Classical logistic solution, the West function and its companion series.
//!
//! With `a = (u0 − 1)/u0` the logistic solution is a geometric series in
//! `e^{−t}`, and the West function replaces each exponential by a
//! Mittag-Leffler function:
//!
//! ```text
//! u(t) = Σ_k a^k e^{−kt}
//! w(t) = Σ_k a^k E_β(−k t^β)
//! S2(t) = Σ_m (m+1) a^m E_β(−m t^β)        (u² averaged the same way)
//! ᶜDᵝw(t) = −Σ_k k a^k E_β(−k t^β)          (termwise Caputo derivative)
//! ```
//!
//! All three converge for `|a| < 1`, i.e. `u0 > 1/2`. Truncation uses the
//! bound `0 ≤ E_β(−x) ≤ 1` for `β ∈ (0, 1]`, so the tail estimates hold
//! uniformly in `t`.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::special::{ml, recip_gamma};

/// Largest truncation order accepted for the West-type series.
pub const MAX_TERMS: usize = 10_000;

/// Smallest per-term Mittag-Leffler tolerance requested.
const ML_TOL_FLOOR: f64 = 1e-15;

/// Initial value `u0 > 1/2` and the series ratio `a = (u0 − 1)/u0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    u0: f64,
    a: f64,
}

impl LogisticParams {
    pub fn new(u0: f64) -> Result<Self> {
        Ok(Self {
            u0,
            a: series_ratio(u0)?,
        })
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn ratio(&self) -> f64 {
        self.a
    }

    /// `u0 = 1` is the fixed point; every series collapses to its first term.
    pub fn is_fixed_point(&self) -> bool {
        self.a == 0.0
    }
}

/// Solution `u0 / (u0 + (1 − u0) e^{−t})` of `u' = u(1 − u)`.
pub fn logistic_exact(u0: f64, t: f64) -> Result<f64> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return Err(domain(format!("initial value must be positive, got {u0}")));
    }
    if !(t >= 0.0) {
        return Err(domain(format!("time must be nonnegative, got {t}")));
    }
    Ok(logistic_unchecked(u0, t))
}

#[inline]
pub(crate) fn logistic_unchecked(u0: f64, t: f64) -> f64 {
    u0 / (u0 + (1.0 - u0) * (-t).exp())
}

/// Ratio `a = (u0 − 1)/u0` of the geometric representation; `|a| < 1`
/// requires `u0 > 1/2`.
pub fn series_ratio(u0: f64) -> Result<f64> {
    if !(u0 > 0.5) || !u0.is_finite() {
        return Err(domain(format!(
            "u0 must exceed 1/2 for the geometric representation, got {u0}"
        )));
    }
    Ok((u0 - 1.0) / u0)
}

/// A truncated West series: `n_terms` is the last index kept and
/// `tail_bound = |a|^{n+1}/(1 − |a|)` bounds everything dropped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WestSeriesSpec {
    pub params: LogisticParams,
    pub beta: f64,
    pub n_terms: usize,
    pub tail_bound: f64,
}

fn check_order(beta: f64) -> Result<()> {
    if beta > 0.0 && beta <= 1.0 {
        Ok(())
    } else {
        Err(domain(format!("order beta must lie in (0, 1], got {beta}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("time must be finite and nonnegative, got {t}")))
    }
}

/// Tail bounds of the three series at truncation index `n`, `r = |a|`.
fn tail_plain(r: f64, n: usize) -> f64 {
    r.powi(n as i32 + 1) / (1.0 - r)
}

fn tail_weighted_m1(r: f64, n: usize) -> f64 {
    // Σ_{m>n} (m+1) r^m
    let n = n as f64;
    r.powf(n + 1.0) * ((n + 2.0) - (n + 1.0) * r) / ((1.0 - r) * (1.0 - r))
}

fn tail_weighted_k(r: f64, n: usize) -> f64 {
    // Σ_{k>n} k r^k
    let n = n as f64;
    r.powf(n + 1.0) * ((n + 1.0) - n * r) / ((1.0 - r) * (1.0 - r))
}

fn truncation_index(r: f64, tol: f64, tail: fn(f64, usize) -> f64) -> Result<usize> {
    if r == 0.0 {
        return Ok(0);
    }
    (0..=MAX_TERMS)
        .find(|&n| tail(r, n) <= tol)
        .ok_or(Error::NotCertified {
            requested: tol,
            achieved: tail(r, MAX_TERMS),
        })
}

/// Mittag-Leffler values `E_β(−k t^β)`, `k = 0..=n`, shared by the West,
/// `S2` and Caputo series at one time point.
#[derive(Debug, Clone)]
pub struct WestExpansion {
    params: LogisticParams,
    beta: f64,
    t: f64,
    tol: f64,
    ladder: Vec<f64>,
}

impl WestExpansion {
    /// Builds the ladder long enough for all three series to meet `tol`:
    /// half of it goes to truncation and half to the Mittag-Leffler errors.
    pub fn new(u0: f64, beta: f64, t: f64, tol: f64) -> Result<Self> {
        let params = LogisticParams::new(u0)?;
        check_order(beta)?;
        check_time(t)?;
        if !(tol > 0.0) {
            return Err(domain(format!("tolerance must be positive, got {tol}")));
        }
        let r = params.ratio().abs();
        let half = 0.5 * tol;
        let n = truncation_index(r, half, tail_plain)?
            .max(truncation_index(r, half, tail_weighted_m1)?)
            .max(truncation_index(r, half, tail_weighted_k)?);

        let ladder = if params.is_fixed_point() || t == 0.0 {
            vec![1.0; n + 1]
        } else {
            let ml_tol = (half * (1.0 - r) * (1.0 - r)).max(ML_TOL_FLOOR);
            let tb = t.powf(beta);
            let mut ladder = Vec::with_capacity(n + 1);
            ladder.push(1.0);
            for k in 1..=n {
                ladder.push(ml(beta, -(k as f64) * tb, ml_tol)?.value);
            }
            ladder
        };
        Ok(Self {
            params,
            beta,
            t,
            tol,
            ladder,
        })
    }

    pub fn params(&self) -> LogisticParams {
        self.params
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    fn weighted_sum(&self, n: usize, weight: impl Fn(usize) -> f64) -> f64 {
        let a = self.params.ratio();
        let mut power = 1.0;
        let mut sum = 0.0;
        for (k, e) in self.ladder.iter().enumerate().take(n + 1) {
            sum += weight(k) * power * e;
            power *= a;
        }
        sum
    }

    fn index(&self, tail: fn(f64, usize) -> f64) -> usize {
        truncation_index(self.params.ratio().abs(), 0.5 * self.tol, tail)
            .expect("ladder was sized for this tolerance")
    }

    /// West function value and its truncation record.
    pub fn west(&self) -> (f64, WestSeriesSpec) {
        let n = self.index(tail_plain);
        let r = self.params.ratio().abs();
        let spec = WestSeriesSpec {
            params: self.params,
            beta: self.beta,
            n_terms: n,
            tail_bound: if r == 0.0 { 0.0 } else { tail_plain(r, n) },
        };
        if self.t == 0.0 {
            return (self.params.u0(), spec);
        }
        (self.weighted_sum(n, |_| 1.0), spec)
    }

    /// `S2(t) = Σ (m+1) a^m E_β(−m t^β)`.
    pub fn s2(&self) -> f64 {
        if self.t == 0.0 {
            return self.params.u0() * self.params.u0();
        }
        self.weighted_sum(self.index(tail_weighted_m1), |m| (m + 1) as f64)
    }

    /// Termwise Caputo derivative `−Σ k a^k E_β(−k t^β)`.
    pub fn caputo(&self) -> f64 {
        if self.t == 0.0 {
            let u0 = self.params.u0();
            return u0 * (1.0 - u0);
        }
        -self.weighted_sum(self.index(tail_weighted_k), |k| k as f64)
    }
}

/// West function `Σ_n a^n E_β(−n t^β)`, truncated once
/// `|a|^{N+1}/(1 − |a|) ≤ tol/2`.
pub fn west_function(u0: f64, beta: f64, t: f64, tol: f64) -> Result<(f64, WestSeriesSpec)> {
    Ok(WestExpansion::new(u0, beta, t, tol)?.west())
}

/// Coefficients `c_m = (m+1) a^m`, `m = 0..=m_max`, of `u(s)² = Σ c_m e^{−ms}`.
pub fn square_series_coeffs(u0: f64, m_max: usize) -> Result<Vec<f64>> {
    let a = series_ratio(u0)?;
    let mut power = 1.0;
    Ok((0..=m_max)
        .map(|m| {
            let c = (m + 1) as f64 * power;
            power *= a;
            c
        })
        .collect())
}

/// `S2(t) = Σ_m (m+1) a^m E_β(−m t^β)`, the average of `u²` against the
/// inverse-subordinator density.
pub fn s2_series(u0: f64, beta: f64, t: f64, tol: f64) -> Result<f64> {
    Ok(WestExpansion::new(u0, beta, t, tol)?.s2())
}

/// Caputo derivative of the West function, taken term by term.
pub fn caputo_west_series(u0: f64, beta: f64, t: f64, tol: f64) -> Result<f64> {
    Ok(WestExpansion::new(u0, beta, t, tol)?.caputo())
}

/// `Li_s(x) = Σ_{k≥1} x^k / k^s` for `|x| < 1`, to 1e-14 absolute.
pub fn polylog_series(s: u32, x: f64) -> Result<f64> {
    if s < 1 {
        return Err(domain("polylog order must be at least 1"));
    }
    if !(x.abs() < 1.0) {
        return Err(domain(format!("polylog series needs |x| < 1, got {x}")));
    }
    let r = x.abs();
    let mut sum = 0.0;
    let mut power = 1.0;
    let mut k = 1u64;
    loop {
        power *= x;
        sum += power / (k as f64).powi(s as i32);
        // remaining terms are below |x|^{k+1} / ((k+1)^s (1 − |x|))
        let tail = (r.powf(k as f64 + 1.0) / (k as f64 + 1.0).powi(s as i32)) / (1.0 - r);
        if tail <= 1e-15 {
            return Ok(sum);
        }
        k += 1;
    }
}

/// Large-time expansion of the West function.
///
/// Order 1: `1 + ln(u0) t^{−β}/Γ(1−β)`. Order 2 adds
/// `−Li_2(a) t^{−2β}/Γ(1−2β)`, which vanishes at `β = 1/2` where
/// `1/Γ(0) = 0`.
pub fn west_asymptotic(u0: f64, beta: f64, t: f64, order: u32) -> Result<f64> {
    if !(u0 >= 0.5) || !u0.is_finite() {
        return Err(domain(format!("u0 must be at least 1/2, got {u0}")));
    }
    check_order(beta)?;
    if !(t > 0.0) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    let first = 1.0 + u0.ln() * t.powf(-beta) * recip_gamma(1.0 - beta);
    match order {
        1 => Ok(first),
        2 => {
            let a = (u0 - 1.0) / u0;
            let li2 = if a == -1.0 {
                -PI * PI / 12.0
            } else {
                polylog_series(2, a)?
            };
            Ok(first - li2 * t.powf(-2.0 * beta) * recip_gamma(1.0 - 2.0 * beta))
        }
        _ => Err(domain(format!("asymptotic order must be 1 or 2, got {order}"))),
    }
}
