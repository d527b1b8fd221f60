//! End-to-end tests of the betafit binary: CSV layouts, exit codes, and
//! byte determinism.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_betafit"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> (String, String, Option<i32>) {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

fn run(args: &[&str]) -> (String, String, Option<i32>) {
    let out = bin().args(args).output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code(),
    )
}

#[test]
fn fit_from_stdin() {
    let (stdout, _, code) = run_with_stdin(
        &["fit"],
        "# a comment\n0.25\n\n0.75\n",
    );
    assert_eq!(code, Some(0));
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        "method,alpha_hat,beta_hat,se_alpha,se_beta,converged,iterations"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    // Symmetric two-point sample: every estimate has alpha_hat == beta_hat.
    for row in &rows {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 7);
        assert_eq!(f[1], f[2], "asymmetric estimate in {row}");
    }
    let sam: Vec<&str> = rows
        .iter()
        .find(|r| r.starts_with("SAM,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(sam[1], "1.82047845");
    let mle: Vec<&str> = rows
        .iter()
        .find(|r| r.starts_with("MLE,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(mle[5], "true");
}

#[test]
fn fit_from_file_with_method_subset() {
    let dir = std::env::temp_dir().join("betafit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sample.txt");
    std::fs::write(&path, "0.2\n0.4\n0.6\n").unwrap();
    let (stdout, _, code) = run(&["fit", path.to_str().unwrap(), "--methods", "mom"]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let f: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(f[0], "MOM");
    assert_eq!(f[1], "3.2");
    assert_eq!(f[2], "4.8");
}

#[test]
fn fit_rejects_out_of_range_values() {
    let (_, stderr, code) = run_with_stdin(&["fit"], "0.5\n1.5\n");
    assert_eq!(code, Some(2));
    assert!(stderr.contains("outside the open interval"));
}

#[test]
fn fit_rejects_unparseable_and_short_input() {
    let (_, _, code) = run_with_stdin(&["fit"], "0.5\nbanana\n");
    assert_eq!(code, Some(2));
    let (_, stderr, code) = run_with_stdin(&["fit"], "0.5\n");
    assert_eq!(code, Some(2));
    assert!(stderr.contains("at least 2"));
}

#[test]
fn fit_degenerate_sample_exit_code() {
    let (_, stderr, code) = run_with_stdin(&["fit"], "0.5\n0.5\n");
    assert_eq!(code, Some(3));
    assert!(stderr.contains("degenerate"));
}

#[test]
fn fit_unknown_method_is_usage_error() {
    let (_, _, code) = run_with_stdin(&["fit", "--methods", "MOM,XYZ"], "0.25\n0.75\n");
    assert_eq!(code, Some(2));
}

#[test]
fn avar_fixture_row() {
    let (stdout, _, code) = run(&[
        "avar",
        "--alpha-range",
        "1",
        "--betas",
        "1",
        "--methods",
        "MLE",
    ]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().collect();
    assert_eq!(rows[0], "alpha,beta,method,avar_alpha,avar_beta,avar_cross");
    assert_eq!(rows[1], "1,1,MLE,1.71215272,1.71215272,1.10422561");
}

#[test]
fn avar_all_methods_finite_on_small_range() {
    let (stdout, _, code) = run(&["avar", "--alpha-range", "0.5:1.5:0.5", "--betas", "0.5,3"]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 3 * 2 * 4);
    for row in rows {
        let f: Vec<&str> = row.split(',').collect();
        for v in &f[3..6] {
            let x: f64 = v.parse().unwrap();
            assert!(x.is_finite(), "non-finite variance in {row}");
        }
    }
}

#[test]
fn moments_all_keys_close() {
    let (stdout, _, code) = run(&["moments", "--alpha", "1", "--beta", "1"]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().collect();
    assert_eq!(rows[0], "key,closed_form,quadrature,abs_diff");
    assert_eq!(rows.len(), 30);
    for row in &rows[1..] {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f.len(), 4);
        let diff: f64 = f[3].parse().unwrap();
        assert!(diff.is_finite() && diff <= 1e-6, "large diff in {row}");
    }
}

#[test]
fn moments_rejects_nonpositive_shape() {
    let (_, _, code) = run(&["moments", "--alpha", "0", "--beta", "1"]);
    assert_eq!(code, Some(2));
    let (_, _, code) = run(&["moments", "--alpha", "2", "--beta", "-1"]);
    assert_eq!(code, Some(2));
}

#[test]
fn simulate_deterministic_and_well_formed() {
    let args = [
        "simulate",
        "--alpha-grid",
        "1,2",
        "--beta-grid",
        "3",
        "--n-grid",
        "5",
        "--reps",
        "25",
        "--seed",
        "9",
    ];
    let (a, _, code_a) = run(&args);
    let (b, _, code_b) = run(&args);
    assert_eq!(code_a, Some(0));
    assert_eq!(code_b, Some(0));
    assert_eq!(a, b);
    let rows: Vec<&str> = a.lines().collect();
    assert_eq!(
        rows[0],
        "alpha_true,beta_true,n,method,abs_bias_alpha,abs_bias_beta,rmse_alpha,rmse_beta,n_fail,reps,cell_seed"
    );
    assert_eq!(rows.len(), 1 + 2 * 4);
    for row in &rows[1..] {
        assert_eq!(row.split(',').count(), 11);
    }
}

#[test]
fn simulate_seed_changes_output() {
    let base = [
        "simulate",
        "--alpha-grid",
        "2",
        "--beta-grid",
        "3",
        "--n-grid",
        "10",
        "--reps",
        "50",
    ];
    let (a, _, _) = run(&base);
    let mut with_seed = base.to_vec();
    with_seed.extend(["--seed", "1"]);
    let (b, _, _) = run(&with_seed);
    assert_ne!(a, b);
}

#[test]
fn simulate_rejects_bad_grids() {
    let (_, _, code) = run(&["simulate", "--alpha-grid", "0,1", "--reps", "1"]);
    assert_eq!(code, Some(2));
    let (_, _, code) = run(&["simulate", "--n-grid", "2.5", "--reps", "1"]);
    assert_eq!(code, Some(2));
    let (_, _, code) = run(&["simulate", "--alpha-grid", "3:1:0.5", "--reps", "1"]);
    assert_eq!(code, Some(2));
}

#[test]
fn simulate_preset_overridable() {
    // The CI preset with every dimension overridden down to a toy grid:
    // explicit flags must win over the preset values.
    let (stdout, _, code) = run(&[
        "simulate",
        "--preset",
        "ci",
        "--alpha-grid",
        "1",
        "--beta-grid",
        "1",
        "--n-grid",
        "5",
        "--reps",
        "10",
        "--methods",
        "MOM",
    ]);
    assert_eq!(code, Some(0));
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert_eq!(rows.len(), 1);
    let f: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(f[9], "10");
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("betafit-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("avar.csv");
    let (stdout, _, code) = run(&[
        "avar",
        "--alpha-range",
        "1",
        "--betas",
        "1",
        "--methods",
        "MOM",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, Some(0));
    assert!(stdout.is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("alpha,beta,method,"));
    assert!(content.ends_with('\n'));
}
