//! Monte Carlo checks of the subordination representation.
//!
//! `L_t` is the inverse of a standard one-sided β-stable subordinator at
//! time `t`. By self-similarity `L_t = (t/S)^β` with `S` a single stable
//! draw, so `E[e^{−λL_t}] = E_β(−λ t^β)` and `w(t) = E[u(L_t)]`.
//!
//! Estimates are reproducible: the sample budget is split over a fixed
//! number of ChaCha substreams, each reduced sequentially, and the partial
//! moments are merged in a fixed pairwise tree whatever the thread count.

use std::f64::consts::PI;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::logistic::logistic_unchecked;

/// Number of substreams each estimate is split into.
pub const SUBSTREAMS: u64 = 64;

/// Smallest sample size accepted by [`mc_laplace_check`].
pub const MIN_LAPLACE_SAMPLES: usize = 1000;

/// Identifies one reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// The generator for this stream, positioned at its start.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Child stream `i` used by the parallel estimators. Children of
    /// distinct parents are disjoint while `stream_id < 2^58`.
    pub fn substream(&self, i: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_mul(SUBSTREAMS).wrapping_add(i),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub std_error: f64,
    pub n: usize,
}

impl McEstimate {
    /// `|mean − target|` in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.std_error
        }
    }

    pub fn within_sigma(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error
    }
}

fn check_open_order(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(domain(format!(
            "stable sampling needs beta in (0, 1), got {beta}"
        )))
    }
}

/// `ln S` for the Kanter representation; `u ∈ (0,1)`, `e > 0`.
#[inline]
fn ln_stable(beta: f64, u: f64, e: f64) -> f64 {
    let c = (1.0 - beta) / beta;
    (beta * PI * u).sin().ln() - (PI * u).sin().ln() / beta
        + c * (((1.0 - beta) * PI * u).sin().ln() - e.ln())
}

#[inline]
fn draw_uniform_exponential<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    let u: f64 = rng.sample(Open01);
    let v: f64 = rng.sample(Open01);
    (u, -v.ln())
}

/// One draw of the standard one-sided β-stable law, `E[e^{−λS}] = e^{−λ^β}`:
///
/// ```text
/// S = sin(βπU)/sin(πU)^{1/β} · (sin((1−β)πU)/E)^{(1−β)/β}
/// ```
///
/// with `U` uniform on `(0,1)` and `E` unit exponential.
pub fn sample_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    check_open_order(beta)?;
    let (u, e) = draw_uniform_exponential(rng);
    Ok(ln_stable(beta, u, e).exp())
}

/// One draw of `L_t = (t/S)^β`, evaluated in logarithms so that extreme
/// stable draws do not overflow.
pub fn sample_inverse_subordinator<R: Rng + ?Sized>(beta: f64, t: f64, rng: &mut R) -> Result<f64> {
    check_open_order(beta)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    Ok(inverse_subordinator(beta, t.ln(), rng))
}

#[inline]
fn inverse_subordinator<R: Rng + ?Sized>(beta: f64, ln_t: f64, rng: &mut R) -> f64 {
    let (u, e) = draw_uniform_exponential(rng);
    (beta * (ln_t - ln_stable(beta, u, e))).exp()
}

/// Count, mean and summed squared deviations of a batch.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Moments, b: Moments) -> Moments {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let wb = b.n as f64 / n as f64;
        Moments {
            n,
            mean: a.mean + d * wb,
            m2: a.m2 + b.m2 + d * d * a.n as f64 * wb,
        }
    }
}

/// Merges adjacent pairs until one batch is left; the order depends only
/// on the number of batches.
fn tree_reduce(mut parts: Vec<Moments>) -> Moments {
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|p| if p.len() == 2 { Moments::merge(p[0], p[1]) } else { p[0] })
            .collect();
    }
    parts.pop().unwrap_or_default()
}

/// Mean of `f(draw)` over `n` draws spread across [`SUBSTREAMS`] substreams.
fn mc_mean<F>(n: usize, stream: RngStream, f: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let k = SUBSTREAMS as usize;
    let parts: Vec<Moments> = (0..k)
        .into_par_iter()
        .map(|i| {
            let count = n / k + usize::from(i < n % k);
            let mut rng = stream.substream(i as u64).rng();
            let mut m = Moments::default();
            for _ in 0..count {
                m.push(f(&mut rng));
            }
            m
        })
        .collect();
    let m = tree_reduce(parts);
    let var = m.m2 / (m.n - 1) as f64;
    McEstimate {
        mean: m.mean,
        std_error: (var / m.n as f64).sqrt(),
        n: m.n,
    }
}

/// Estimates `E[e^{−λ L_t}]`, which should equal `E_β(−λ t^β)`.
pub fn mc_laplace_check(
    beta: f64,
    lambda: f64,
    t: f64,
    n: usize,
    stream: RngStream,
) -> Result<McEstimate> {
    check_open_order(beta)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(domain(format!("rate must be positive, got {lambda}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    if n < MIN_LAPLACE_SAMPLES {
        return Err(domain(format!(
            "need at least {MIN_LAPLACE_SAMPLES} samples, got {n}"
        )));
    }
    let ln_t = t.ln();
    Ok(mc_mean(n, stream, |rng| {
        (-lambda * inverse_subordinator(beta, ln_t, rng)).exp()
    }))
}

/// Estimates `E[u(L_t)]` with `u` the classical logistic solution from `u0`.
/// Unlike the West series this is defined for every `u0 > 0`.
pub fn mc_west(u0: f64, beta: f64, t: f64, n: usize, stream: RngStream) -> Result<McEstimate> {
    check_open_order(beta)?;
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(domain(format!("initial value must be positive, got {u0}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    if n < 2 {
        return Err(domain("need at least two samples"));
    }
    let ln_t = t.ln();
    Ok(mc_mean(n, stream, |rng| {
        logistic_unchecked(u0, inverse_subordinator(beta, ln_t, rng))
    }))
}

/// Estimates `E[u(L)u(L′)] − E[u(L)²]` from pairs of independent copies of
/// `L_t`; equals `w(t)² − S2(t)`.
pub fn mc_double_integral(u0: f64, beta: f64, t: f64, n: usize, stream: RngStream) -> Result<McEstimate> {
    check_open_order(beta)?;
    if !(u0 > 0.0 && u0.is_finite()) {
        return Err(domain(format!("initial value must be positive, got {u0}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be positive, got {t}")));
    }
    if n < 2 {
        return Err(domain("need at least two samples"));
    }
    let ln_t = t.ln();
    Ok(mc_mean(n, stream, |rng| {
        let a = logistic_unchecked(u0, inverse_subordinator(beta, ln_t, rng));
        let b = logistic_unchecked(u0, inverse_subordinator(beta, ln_t, rng));
        // symmetrised so that E = E[u u′] − E[u²]
        a * b - 0.5 * (a * a + b * b)
    }))
}
