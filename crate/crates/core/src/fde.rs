//! Scalar Caputo initial-value problems `ᶜDᵝw = f(t, w)`, `w(0) = w0`.
//!
//! [`solve_fracpece`] is the fractional Adams–Bashforth–Moulton method in
//! PECE form: a product-rectangle predictor followed by one product-trapezoid
//! corrector. History sums are evaluated directly, `O(M²)` work for `M`
//! steps. [`caputo_l1`] is the L1 discretisation of the Caputo derivative,
//! used to check solutions independently of the solver.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::special::{gamma, recip_gamma};

/// Relative slack allowed between `t_end` and the nearest multiple of `h`.
const GRID_SLACK: f64 = 1e-9;

/// A scalar fractional initial-value problem on a uniform grid.
#[derive(Clone)]
pub struct FdeProblem<F> {
    pub beta: f64,
    pub rhs: F,
    pub w0: f64,
    pub t_end: f64,
    pub h: f64,
}

impl<F: Fn(f64, f64) -> f64> FdeProblem<F> {
    pub fn new(beta: f64, rhs: F, w0: f64, t_end: f64, h: f64) -> Result<Self> {
        let p = Self {
            beta,
            rhs,
            w0,
            t_end,
            h,
        };
        p.steps()?;
        Ok(p)
    }

    /// Number of steps `M = t_end / h`, which must be (close to) an integer.
    pub fn steps(&self) -> Result<usize> {
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(domain(format!("order beta must lie in (0, 1], got {}", self.beta)));
        }
        if !self.w0.is_finite() {
            return Err(domain("initial value must be finite"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(domain(format!("horizon must be positive, got {}", self.t_end)));
        }
        if !(self.h > 0.0 && self.h < self.t_end) {
            return Err(domain(format!(
                "step must satisfy 0 < h < t_end, got h = {}",
                self.h
            )));
        }
        let m = (self.t_end / self.h).round();
        if (m * self.h - self.t_end).abs() > GRID_SLACK * self.t_end {
            return Err(domain(format!(
                "t_end = {} is not a multiple of h = {}",
                self.t_end, self.h
            )));
        }
        Ok(m as usize)
    }
}

/// What produced an [`FdeSolution`].
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeInfo {
    pub name: &'static str,
    pub beta: f64,
    pub h: f64,
    pub steps: usize,
    pub corrector_iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdeSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub scheme: SchemeInfo,
}

impl FdeSolution {
    /// Piecewise-linear interpolation of the solution; `t` is clamped to the grid.
    pub fn interpolate(&self, t: f64) -> f64 {
        let h = self.scheme.h;
        let last = self.values.len() - 1;
        let x = (t / h).clamp(0.0, last as f64);
        let i = (x.floor() as usize).min(last.saturating_sub(1));
        let frac = x - i as f64;
        if last == 0 {
            return self.values[0];
        }
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }
}

/// One-pass fractional Adams–Bashforth–Moulton (PECE) integration.
///
/// ```text
/// predictor  wᴾ_{n+1} = w0 + hᵝ/Γ(β+1) Σ_j [(n+1−j)ᵝ − (n−j)ᵝ] f_j
/// corrector  w_{n+1}  = w0 + hᵝ/Γ(β+2) [f(t_{n+1}, wᴾ_{n+1}) + Σ_j a_{j,n+1} f_j]
/// ```
///
/// A non-finite right-hand side or iterate aborts with the step index.
pub fn solve_fracpece<F: Fn(f64, f64) -> f64>(p: &FdeProblem<F>) -> Result<FdeSolution> {
    let m = p.steps()?;
    let beta = p.beta;
    let h = p.h;

    // k^β and k^{β+1} for every history offset
    let pow_b: Vec<f64> = (0..=m + 1).map(|k| (k as f64).powf(beta)).collect();
    let pow_b1: Vec<f64> = (0..=m + 1).map(|k| (k as f64).powf(beta + 1.0)).collect();
    let pred_w: Vec<f64> = (0..=m).map(|k| pow_b[k + 1] - pow_b[k]).collect();
    let corr_w: Vec<f64> = (0..m)
        .map(|k| pow_b1[k + 2] + pow_b1[k] - 2.0 * pow_b1[k + 1])
        .collect();

    let hb = h.powf(beta);
    let pred_scale = hb * recip_gamma(beta + 1.0);
    let corr_scale = hb * recip_gamma(beta + 2.0);

    let grid: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
    let mut values = Vec::with_capacity(m + 1);
    let mut f = Vec::with_capacity(m + 1);
    values.push(p.w0);
    f.push(checked((p.rhs)(0.0, p.w0), 0)?);

    for n in 0..m {
        let nf = n as f64;
        let mut pred = 0.0;
        for (j, fj) in f.iter().enumerate() {
            pred += pred_w[n - j] * fj;
        }
        let w_pred = checked(p.w0 + pred_scale * pred, n + 1)?;

        let a0 = pow_b1[n] - (nf - beta) * pow_b[n + 1];
        let mut corr = a0 * f[0];
        for (j, fj) in f.iter().enumerate().skip(1) {
            corr += corr_w[n - j] * fj;
        }
        let t_next = grid[n + 1];
        let f_pred = checked((p.rhs)(t_next, w_pred), n + 1)?;
        let w_next = checked(p.w0 + corr_scale * (f_pred + corr), n + 1)?;
        values.push(w_next);
        f.push(checked((p.rhs)(t_next, w_next), n + 1)?);
    }

    Ok(FdeSolution {
        grid,
        values,
        scheme: SchemeInfo {
            name: "fracpece",
            beta,
            h,
            steps: m,
            corrector_iterations: 1,
        },
    })
}

#[inline]
fn checked(x: f64, step: usize) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite { step })
    }
}

/// The logistic problem `ᶜDᵝw = w(1 − w)`, `w(0) = u0 ∈ (0, 1]`.
pub fn solve_fle(u0: f64, beta: f64, t_end: f64, h: f64) -> Result<FdeSolution> {
    if !(u0 > 0.0 && u0 <= 1.0) {
        return Err(domain(format!("initial value must lie in (0, 1], got {u0}")));
    }
    solve_fracpece(&FdeProblem::new(beta, |_, w| w * (1.0 - w), u0, t_end, h)?)
}

/// L1 approximation of the Caputo derivative from uniform samples.
///
/// Entry `i − 1` of the result approximates the derivative at grid index
/// `i`, `i = 1..len`:
/// `D_i = h^{−β}/Γ(2−β) Σ_{j<i} (w_{j+1} − w_j) [(i−j)^{1−β} − (i−j−1)^{1−β}]`.
pub fn caputo_l1(values: &[f64], h: f64, beta: f64) -> Result<Vec<f64>> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!(
            "L1 scheme needs beta in (0, 1), got {beta}; use plain differences at beta = 1"
        )));
    }
    if values.len() < 2 {
        return Err(domain("L1 scheme needs at least two samples"));
    }
    if !(h > 0.0) {
        return Err(domain(format!("step must be positive, got {h}")));
    }
    let n = values.len();
    let e = 1.0 - beta;
    let weights: Vec<f64> = (0..n)
        .map(|k| ((k + 1) as f64).powf(e) - (k as f64).powf(e))
        .collect();
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let scale = h.powf(-beta) / gamma(2.0 - beta)?;
    Ok((1..n)
        .into_par_iter()
        .map(|i| {
            let s: f64 = (0..i).map(|j| diffs[j] * weights[i - 1 - j]).sum();
            scale * s
        })
        .collect())
}
