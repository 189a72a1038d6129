use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use fraclog::fde::solve_fle;
use fraclog::logistic::{west_function, WestExpansion};
use fraclog::mfle::{estimate_order, log_spaced, residual as mfle_residual, Convention, OrderMethod};
use fraclog::special::ml as ml_eval;
use fraclog::stochastic::{mc_laplace_check, mc_west, McEstimate, RngStream};
use fraclog::Error;

use crate::output::{fmt_sig, open_sink, write_csv};

const FIGURE_POINTS: usize = 512;
const FIGURE_U0: f64 = 0.75;
const FIGURE_STEP: f64 = 1.0 / 128.0;
const FIGURE_TOL: f64 = 1e-12;

#[derive(Debug)]
pub enum CliError {
    Domain(String),
    Io(String),
    NotCertified(String),
}

impl CliError {
    pub fn report(&self) -> ExitCode {
        let (msg, code) = match self {
            CliError::Domain(m) => (m, 2),
            CliError::Io(m) => (m, 3),
            CliError::NotCertified(m) => (m, 4),
        };
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCertified { .. } | Error::TermCap { .. } => CliError::NotCertified(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn io_err(path: Option<&Path>) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(format!("stdout: {e}")),
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn emit_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let mut sink = open_sink(path).map_err(io_err(path))?;
    write_csv(&mut *sink, header, rows).map_err(io_err(path))
}

fn print_lines(lines: &[String]) -> Result<()> {
    let mut out = io::stdout().lock();
    for l in lines {
        writeln!(out, "{l}").map_err(io_err(None))?;
    }
    Ok(())
}

fn fmt_value(v: f64) -> String {
    if v.abs() < 1e6 {
        format!("{v:.10}")
    } else {
        format!("{v:.10e}")
    }
}

pub fn ml(beta: f64, z: f64, tol: f64) -> Result<()> {
    let r = ml_eval(beta, z, tol)?;
    print_lines(&[
        fmt_value(r.value),
        format!(
            "regime={} terms={} error_bound={:.3e}",
            r.regime.name(),
            r.terms_used,
            r.error_bound
        ),
    ])
}

fn figure_times(t_max: f64) -> Vec<f64> {
    (0..FIGURE_POINTS)
        .map(|i| t_max * i as f64 / (FIGURE_POINTS - 1) as f64)
        .collect()
}

fn west_column(beta: f64, times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| Ok(west_function(FIGURE_U0, beta, t, FIGURE_TOL)?.0))
        .collect()
}

pub fn figure(which: u8, out: Option<&Path>) -> Result<()> {
    match which {
        1 | 2 => {
            let beta = if which == 1 { 0.7 } else { 0.9 };
            let times = figure_times(5.0);
            let wf = west_column(beta, &times)?;
            let sol = solve_fle(FIGURE_U0, beta, 5.0, FIGURE_STEP)?;
            let rows: Vec<Vec<f64>> = times
                .iter()
                .zip(&wf)
                .map(|(&t, &w)| vec![t, w, sol.interpolate(t)])
                .collect();
            emit_csv(out, &["t", "wf", "fde"], &rows)
        }
        3 => {
            let times = figure_times(10.0);
            let cols = [0.7, 0.8, 0.9]
                .iter()
                .map(|&b| west_column(b, &times))
                .collect::<Result<Vec<_>>>()?;
            let rows: Vec<Vec<f64>> = times
                .iter()
                .enumerate()
                .map(|(i, &t)| vec![t, cols[0][i], cols[1][i], cols[2][i]])
                .collect();
            emit_csv(out, &["t", "wf_07", "wf_08", "wf_09"], &rows)
        }
        _ => Err(CliError::Domain(format!("unknown figure {which}"))),
    }
}

pub fn solve(u0: f64, beta: f64, t_max: f64, h: f64, out: Option<&Path>) -> Result<()> {
    let sol = solve_fle(u0, beta, t_max, h)?;
    let rows: Vec<Vec<f64>> = sol
        .grid
        .iter()
        .zip(&sol.values)
        .map(|(&t, &w)| vec![t, w])
        .collect();
    emit_csv(out, &["t", "w"], &rows)
}

pub fn west_point(u0: f64, beta: f64, t: f64, tol: f64) -> Result<()> {
    let (w, spec) = west_function(u0, beta, t, tol)?;
    print_lines(&[
        fmt_value(w),
        format!("terms={} tail_bound={:.3e}", spec.n_terms + 1, spec.tail_bound),
    ])
}

pub fn west_grid(
    u0: f64,
    beta: f64,
    t_max: f64,
    steps: usize,
    tol: f64,
    out: Option<&Path>,
) -> Result<()> {
    if steps < 2 || t_max.is_nan() || t_max <= 0.0 {
        return Err(CliError::Domain(
            "grid needs t-max > 0 and at least 2 points".into(),
        ));
    }
    let rows = (0..steps)
        .map(|i| {
            let t = t_max * i as f64 / (steps - 1) as f64;
            let e = WestExpansion::new(u0, beta, t, tol)?;
            Ok(vec![t, e.west().0, e.s2(), e.caputo()])
        })
        .collect::<Result<Vec<_>>>()?;
    emit_csv(out, &["t", "wf", "s2", "caputo"], &rows)
}

pub fn residual(
    u0: f64,
    beta: f64,
    grid: &[f64],
    convention: Convention,
    tol: f64,
    out: Option<&Path>,
) -> Result<()> {
    let r = mfle_residual(u0, beta, grid, convention, tol)?;
    let rows: Vec<Vec<f64>> = (0..r.t_grid.len())
        .map(|i| vec![r.t_grid[i], r.lhs[i], r.rhs[i], r.residual[i]])
        .collect();
    emit_csv(out, &["t", "lhs", "rhs", "residual"], &rows)?;
    let summary = format!(
        "convention={} max_abs_residual={:.3e}",
        convention.name(),
        r.max_abs_residual
    );
    if out.is_some() {
        print_lines(&[summary])
    } else {
        eprintln!("{summary}");
        Ok(())
    }
}

fn report_estimate(samples: &[(f64, f64)], u0: f64, method: OrderMethod) -> Result<()> {
    let e = estimate_order(samples, u0, method)?;
    print_lines(&[
        format!("{:.4}", e.beta_hat),
        format!(
            "method={} raw={} window={}..{} saturated={}",
            e.method.name(),
            fmt_sig(e.raw),
            fmt_sig(e.window.0),
            fmt_sig(e.window.1),
            e.saturated
        ),
    ])
}

pub fn estimate_self_test(
    beta: f64,
    u0: f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
    tol: f64,
    method: OrderMethod,
) -> Result<()> {
    if t_min.is_nan() || t_max.is_nan() || t_min <= 0.0 || t_max <= t_min || steps < 2 {
        return Err(CliError::Domain(
            "window needs 0 < t-min < t-max and at least 2 points".into(),
        ));
    }
    let samples = log_spaced(t_min, t_max, steps)
        .into_iter()
        .map(|t| Ok((t, west_function(u0, beta, t, tol)?.0)))
        .collect::<Result<Vec<_>>>()?;
    report_estimate(&samples, u0, method)
}

/// Reads `t,w` pairs from the first two columns of a CSV file with a header.
fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path).map_err(io_err(Some(path)))?;
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            let mut fields = line.split(',').map(str::trim);
            let mut next = || -> Option<f64> { fields.next()?.parse().ok() };
            match (next(), next()) {
                (Some(t), Some(w)) => Ok((t, w)),
                _ => Err(CliError::Domain(format!(
                    "{}: line {} is not a t,w pair",
                    path.display(),
                    i + 2
                ))),
            }
        })
        .collect()
}

pub fn estimate_from_file(path: &Path, u0: f64, method: OrderMethod) -> Result<()> {
    let samples = read_samples(path)?;
    report_estimate(&samples, u0, method)
}

fn print_estimate(e: &McEstimate, reference: f64) -> Result<()> {
    print_lines(&[
        "mean,std_error,n".to_string(),
        format!("{},{},{}", fmt_sig(e.mean), fmt_sig(e.std_error), e.n),
    ])?;
    eprintln!(
        "reference={} z_score={:.2}",
        fmt_sig(reference),
        e.z_score(reference)
    );
    Ok(())
}

pub fn simulate_laplace(beta: f64, lambda: f64, t: f64, n: usize, seed: u64) -> Result<()> {
    let e = mc_laplace_check(beta, lambda, t, n, RngStream::new(seed, 0))?;
    let reference = ml_eval(beta, -lambda * t.powf(beta), 1e-13)?.value;
    print_estimate(&e, reference)
}

pub fn simulate_west(u0: f64, beta: f64, t: f64, n: usize, seed: u64) -> Result<()> {
    let e = mc_west(u0, beta, t, n, RngStream::new(seed, 0))?;
    match west_function(u0, beta, t, 1e-12) {
        Ok((w, _)) => print_estimate(&e, w),
        // the expectation exists for u0 <= 1/2, the series does not
        Err(_) => print_lines(&[
            "mean,std_error,n".to_string(),
            format!("{},{},{}", fmt_sig(e.mean), fmt_sig(e.std_error), e.n),
        ]),
    }
}
