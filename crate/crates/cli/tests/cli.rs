use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fraclog::logistic::west_function;
use fraclog::mfle::{estimate_order, log_spaced, OrderMethod};

fn fraclog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraclog"))
        .args(args)
        .env_remove("FRACLOG_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn first_line(o: &Output) -> String {
    stdout(o).lines().next().unwrap_or_default().to_string()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn ml_values() {
    let o = fraclog(&["ml", "--beta", "1", "--z", "-1"]);
    assert!(o.status.success());
    assert_eq!(first_line(&o), "0.3678794412");
    assert_eq!(first_line(&fraclog(&["ml", "--beta", "0.7", "--z", "0"])), "1.0000000000");
    // E_{1/2}(-1) = e erfc(1) = 0.42758357615580700441...
    assert_eq!(first_line(&fraclog(&["ml", "--beta", "0.5", "--z", "-1"])), "0.4275835762");
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("regime=series"));
}

#[test]
fn exit_codes() {
    assert_eq!(fraclog(&["ml", "--beta", "2.5", "--z", "1"]).status.code(), Some(2));
    assert_eq!(fraclog(&["ml", "--beta", "0.6", "--z", "60"]).status.code(), Some(4));
    assert_eq!(fraclog(&["ml", "--beta", "0.5"]).status.code(), Some(2));
    assert_eq!(fraclog(&["west", "--beta", "0.7", "--u0", "0.4", "--t", "1"]).status.code(), Some(2));
    assert_eq!(
        fraclog(&["solve", "--beta", "0.7", "--t-max", "1", "--h", "0.3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fraclog(&["solve", "--beta", "0.7", "--h", "0.1", "--steps", "10"]).status.code(),
        Some(2)
    );
    let o = fraclog(&["figure", "--which", "1", "--out", "/nonexistent-dir/fig.csv"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn figure_one_starts_at_initial_value() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1.csv");
    let o = fraclog(&["figure", "--which", "1", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "wf", "fde"]);
    assert_eq!(rows.len(), 512);
    assert_eq!(rows[0], vec![0.0, 0.75, 0.75]);
    assert_eq!(rows[511][0], 5.0);
    let gap = rows.iter().map(|r| (r[1] - r[2]).abs()).fold(0.0, f64::max);
    assert!(gap < 0.05);
}

#[test]
fn figure_three_curves_approach_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig3.csv");
    assert!(fraclog(&["figure", "--which", "3", "--out", path.to_str().unwrap()]).status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "wf_07", "wf_08", "wf_09"]);
    let last = rows.last().unwrap();
    assert_eq!(last[0], 10.0);
    assert!(last[1..].iter().all(|w| (w - 1.0).abs() < 0.1));
}

#[test]
fn csv_is_reproducible() {
    let a = fraclog(&["figure", "--which", "2"]);
    let b = fraclog(&["figure", "--which", "2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let longest = text
        .lines()
        .skip(1)
        .flat_map(|l| l.split(',').map(|f| f.trim_start_matches("0.").len()).collect::<Vec<_>>())
        .max()
        .unwrap();
    assert!(longest <= 17, "fields wider than 15 significant digits");
}

#[test]
fn residual_rl_balances() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("res.csv");
    let o = fraclog(&[
        "residual", "--beta", "0.7", "--u0", "0.75", "--convention", "rl", "--grid", "0.5,1,2,5",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["t", "lhs", "rhs", "residual"]);
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r[3].abs() <= 1e-8));
    let summary = first_line(&o);
    let max: f64 = summary.split("max_abs_residual=").nth(1).unwrap().parse().unwrap();
    assert!(max <= 1e-8);
}

#[test]
fn residual_caputo_shows_boundary_term() {
    let o = fraclog(&["residual", "--beta", "0.7", "--convention", "caputo", "--grid", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    assert!((row[3] + 0.75 / 2.991_568_987_687_590_6).abs() < 1e-8);
}

#[test]
fn estimate_self_test_delegates() {
    let o = fraclog(&["estimate", "--beta-true", "0.7", "--u0", "0.75", "--method", "limit"]);
    assert!(o.status.success());
    let beta: f64 = first_line(&o).parse().unwrap();
    assert!((beta - 0.7).abs() <= 0.03);
    assert!(stdout(&o).contains("method=limit_formula"));

    let o = fraclog(&["estimate", "--beta-true", "0.7", "--u0", "0.75", "--method", "regression"]);
    let samples: Vec<(f64, f64)> = log_spaced(20.0, 200.0, 64)
        .into_iter()
        .map(|t| (t, west_function(0.75, 0.7, t, 1e-13).unwrap().0))
        .collect();
    let lib = estimate_order(&samples, 0.75, OrderMethod::LoglogRegression).unwrap();
    assert_eq!(first_line(&o), format!("{:.4}", lib.beta_hat));
}

#[test]
fn estimate_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let mut text = String::from("t,w\n");
    for t in log_spaced(20.0, 200.0, 64) {
        text.push_str(&format!("{t},{}\n", west_function(0.75, 0.9, t, 1e-13).unwrap().0));
    }
    fs::write(&path, text).unwrap();
    let o = fraclog(&["estimate", "--input", path.to_str().unwrap(), "--method", "limit"]);
    assert!(o.status.success());
    let beta: f64 = first_line(&o).parse().unwrap();
    assert!((beta - 0.9).abs() <= 0.03);
    let missing = fraclog(&["estimate", "--input", "/nonexistent/samples.csv"]);
    assert_eq!(missing.status.code(), Some(3));
}

fn simulate(args: &[&str], env_seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fraclog"));
    cmd.arg("simulate").args(args).env_remove("FRACLOG_SEED");
    if let Some(s) = env_seed {
        cmd.env("FRACLOG_SEED", s);
    }
    cmd.output().unwrap()
}

#[test]
fn simulate_laplace_matches_mittag_leffler() {
    let o = simulate(&["--beta", "0.5", "--lambda", "1", "--t", "1", "--n", "1000000", "--seed", "42"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mean,std_error,n"));
    let f: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(f[2], 1e6);
    assert!((f[0] - 0.427_583_576_155_807).abs() <= 3.0 * f[1]);
}

#[test]
fn seed_precedence() {
    let args = ["--beta", "0.7", "--n", "5000"];
    let flag = simulate(&[&args[..], &["--seed", "42"]].concat(), None);
    let env = simulate(&args, Some("42"));
    let both = simulate(&[&args[..], &["--seed", "42"]].concat(), Some("7"));
    let default = simulate(&args, None);
    let zero = simulate(&[&args[..], &["--seed", "0"]].concat(), None);
    assert_eq!(flag.stdout, env.stdout);
    assert_eq!(flag.stdout, both.stdout);
    assert_eq!(default.stdout, zero.stdout);
    assert_ne!(flag.stdout, default.stdout);
}

#[test]
fn simulate_west_quantity() {
    let o = simulate(&["--quantity", "west", "--beta", "0.7", "--u0", "1", "--n", "1000"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().nth(1), Some("1,0,1000"));
}

#[test]
fn help_everywhere() {
    let subcommands = [
        ("ml", &["--beta", "--z", "--tol"][..]),
        ("figure", &["--which", "--out"]),
        ("solve", &["--beta", "--u0", "--t-max", "--h", "--steps", "--out"]),
        ("west", &["--beta", "--u0", "--t", "--t-max", "--steps", "--tol", "--out"]),
        ("residual", &["--beta", "--u0", "--convention", "--grid", "--h", "--tol", "--out"]),
        ("estimate", &["--method", "--beta-true", "--input", "--u0", "--t-min", "--t-max", "--steps"]),
        ("simulate", &["--quantity", "--beta", "--lambda", "--u0", "--t", "--n", "--seed"]),
    ];
    for (cmd, flags) in subcommands {
        let o = fraclog(&[cmd, "--help"]);
        assert!(o.status.success(), "{cmd}");
        let text = stdout(&o);
        for flag in flags {
            assert!(text.contains(flag), "{cmd} --help lacks {flag}");
        }
    }
    assert!(fraclog(&["--help"]).status.success());
}

#[test]
fn solve_and_west_outputs() {
    let o = fraclog(&["solve", "--beta", "1", "--t-max", "1", "--steps", "64"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 66);
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    let u = 0.75 / (0.75 + 0.25 * (-1f64).exp());
    assert!((last[1] - u).abs() < 2e-4);

    let o = fraclog(&["west", "--beta", "0.7", "--t", "0"]);
    assert_eq!(first_line(&o), "0.7500000000");
    let o = fraclog(&["west", "--beta", "0.7", "--t-max", "2", "--steps", "5"]);
    assert!(stdout(&o).starts_with("t,wf,s2,caputo\n0,0.75,0.5625,0.1875\n"));
}
