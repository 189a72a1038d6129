//! `fraclog`: Mittag-Leffler values, West-function and fractional logistic
//! curves, MFLE residuals, order estimates and Monte Carlo checks.
//!
//! Exit status: 0 success, 2 domain or usage error, 3 I/O error, 4 requested
//! tolerance not certified.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "fraclog", version, about = "Fractional logistic numerics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Mittag-Leffler function E_beta(z).
    Ml(MlArgs),
    /// Write the data behind one of the three figures as CSV.
    Figure(FigureArgs),
    /// Solve the fractional logistic equation with the PECE scheme.
    Solve(SolveArgs),
    /// Evaluate the West function at one time or on a grid.
    West(WestArgs),
    /// Residual of the modified fractional logistic equation.
    Residual(ResidualArgs),
    /// Estimate the fractional order from late-time samples.
    Estimate(EstimateArgs),
    /// Monte Carlo estimates through the inverse stable subordinator.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct MlArgs {
    /// Order, 0 < beta < 2.
    #[arg(long)]
    beta: f64,
    /// Real argument.
    #[arg(long, allow_hyphen_values = true)]
    z: f64,
    /// Error tolerance, relative for |E| > 1 and absolute below.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number: 1 (beta 0.7), 2 (beta 0.9) or 3 (three orders to t = 10).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    which: u8,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Order, 0 < beta <= 1.
    #[arg(long)]
    beta: f64,
    /// Initial value, 0 < u0 <= 1.
    #[arg(long, default_value_t = 0.75)]
    u0: f64,
    /// Final time.
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    /// Step size; t-max must be a multiple of it.
    #[arg(long, conflicts_with = "steps")]
    h: Option<f64>,
    /// Number of steps (sets h = t-max / steps). Default h is 2^-7.
    #[arg(long)]
    steps: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WestArgs {
    /// Order, 0 < beta <= 1.
    #[arg(long)]
    beta: f64,
    /// Initial value, u0 > 1/2.
    #[arg(long, default_value_t = 0.75)]
    u0: f64,
    /// Single evaluation time; prints the value instead of a CSV grid.
    #[arg(long, conflicts_with_all = ["t_max", "steps", "out"])]
    t: Option<f64>,
    /// Grid end for CSV output.
    #[arg(long, default_value_t = 5.0)]
    t_max: f64,
    /// Number of grid points for CSV output.
    #[arg(long, default_value_t = 512)]
    steps: usize,
    /// Series truncation tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    /// Termwise Caputo derivative of the series.
    Caputo,
    /// Caputo series plus the Riemann-Liouville boundary term.
    Rl,
    /// L1 differences of sampled values plus the boundary term.
    L1,
}

#[derive(Args)]
struct ResidualArgs {
    /// Order, 0 < beta <= 1 (beta < 1 for l1).
    #[arg(long)]
    beta: f64,
    /// Initial value, u0 > 1/2.
    #[arg(long, default_value_t = 0.75)]
    u0: f64,
    /// Left-hand-side derivative convention.
    #[arg(long, value_enum, default_value_t = ConventionArg::Rl)]
    convention: ConventionArg,
    /// Comma-separated positive, increasing times.
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,2,5,10")]
    grid: Vec<f64>,
    /// Sample spacing for the l1 convention.
    #[arg(long, default_value_t = fraclog::mfle::DEFAULT_L1_STEP)]
    h: f64,
    /// Series truncation tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Output file for the t,lhs,rhs,residual table; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Slope of ln|1 - w| against ln t.
    Regression,
    /// Median of t w'/(1 - w) over the last quartile.
    Limit,
}

#[derive(Args)]
struct EstimateArgs {
    /// Estimator.
    #[arg(long, value_enum, default_value_t = MethodArg::Regression)]
    method: MethodArg,
    /// Self-test: generate exact West-function samples of this order.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    beta_true: Option<f64>,
    /// CSV file with columns t,w (header row required).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Initial value of the sampled solution.
    #[arg(long, default_value_t = 0.75)]
    u0: f64,
    /// Window start for self-test samples.
    #[arg(long, default_value_t = 20.0)]
    t_min: f64,
    /// Window end for self-test samples.
    #[arg(long, default_value_t = 200.0)]
    t_max: f64,
    /// Number of log-spaced self-test samples.
    #[arg(long, default_value_t = 64)]
    steps: usize,
    /// Series truncation tolerance for self-test samples.
    #[arg(long, default_value_t = 1e-13)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    /// E[exp(-lambda L_t)], compared with E_beta(-lambda t^beta).
    Laplace,
    /// E[u(L_t)], compared with the West function.
    West,
}

#[derive(Args)]
struct SimulateArgs {
    /// Which expectation to estimate.
    #[arg(long, value_enum, default_value_t = Quantity::Laplace)]
    quantity: Quantity,
    /// Order, 0 < beta < 1.
    #[arg(long)]
    beta: f64,
    /// Laplace rate (laplace only).
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Initial value (west only).
    #[arg(long, default_value_t = 0.75)]
    u0: f64,
    /// Time.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Number of samples.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Random seed; overrides FRACLOG_SEED.
    #[arg(long, env = "FRACLOG_SEED", default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ml(a) => commands::ml(a.beta, a.z, a.tol),
        Command::Figure(a) => commands::figure(a.which, a.out.as_deref()),
        Command::Solve(a) => {
            let h = match (a.h, a.steps) {
                (Some(h), _) => h,
                (None, Some(0)) => {
                    return commands::CliError::Domain("steps must be positive".into()).report()
                }
                (None, Some(n)) => a.t_max / n as f64,
                (None, None) => 2f64.powi(-7),
            };
            commands::solve(a.u0, a.beta, a.t_max, h, a.out.as_deref())
        }
        Command::West(a) => match a.t {
            Some(t) => commands::west_point(a.u0, a.beta, t, a.tol),
            None => commands::west_grid(a.u0, a.beta, a.t_max, a.steps, a.tol, a.out.as_deref()),
        },
        Command::Residual(a) => {
            let convention = match a.convention {
                ConventionArg::Caputo => fraclog::mfle::Convention::CaputoSeries,
                ConventionArg::Rl => fraclog::mfle::Convention::RiemannLiouvilleSeries,
                ConventionArg::L1 => fraclog::mfle::Convention::NumericalL1 { h: a.h },
            };
            commands::residual(a.u0, a.beta, &a.grid, convention, a.tol, a.out.as_deref())
        }
        Command::Estimate(a) => {
            let method = match a.method {
                MethodArg::Regression => fraclog::mfle::OrderMethod::LoglogRegression,
                MethodArg::Limit => fraclog::mfle::OrderMethod::LimitFormula,
            };
            match (a.beta_true, a.input) {
                (Some(beta), _) => commands::estimate_self_test(
                    beta, a.u0, a.t_min, a.t_max, a.steps, a.tol, method,
                ),
                (None, Some(path)) => commands::estimate_from_file(&path, a.u0, method),
                (None, None) => unreachable!("clap requires one of the sources"),
            }
        }
        Command::Simulate(a) => match a.quantity {
            Quantity::Laplace => commands::simulate_laplace(a.beta, a.lambda, a.t, a.n, a.seed),
            Quantity::West => commands::simulate_west(a.u0, a.beta, a.t, a.n, a.seed),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
