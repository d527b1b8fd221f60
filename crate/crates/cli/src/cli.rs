//! Command-line front end: fit samples from files, run simulation grids,
//! and emit asymptotic-variance curves and moment-oracle diagnostics as CSV.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 for a
//! degenerate sample (fewer than two distinct observations).

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use betafit_core::asymptotics::{acov_mom, crlb, sigma1, sigma2_sandwich, stderr, Cov2};
use betafit_core::betadist::{exact_moment, quad_moment, BetaParams, MomentKey, Sample};
use betafit_core::estimators::{fit_method, suff_stats, Method};

use crate::format::fmt_real;
use crate::montecarlo::{render_csv, run_grid, SimConfig};

const EXIT_USAGE: u8 = 2;
const EXIT_DEGENERATE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "betafit",
    version,
    about = "Point estimators, asymptotic variances and Monte Carlo benchmarks for the beta distribution"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fit a sample (one value per line, '#' comments ignored) with the
    /// requested estimators.
    Fit {
        /// Input file; standard input when omitted.
        input: Option<PathBuf>,
        /// Comma-separated subset of MOM,MLE,SAM,RSA.
        #[arg(long, default_value = "MOM,MLE,SAM,RSA")]
        methods: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo bias/rMSE grid simulation.
    Simulate {
        /// Alpha grid: comma list or start:stop:step.
        #[arg(long, default_value = "0.1:3:0.1")]
        alpha_grid: String,
        /// Beta grid: comma list or start:stop:step.
        #[arg(long, default_value = "0.5,1,3")]
        beta_grid: String,
        /// Sample-size grid: comma list or start:stop:step.
        #[arg(long, default_value = "5,10,20")]
        n_grid: String,
        /// Replications per cell.
        #[arg(long, default_value_t = 10000)]
        reps: usize,
        /// Named protocol; overrides the grid/reps defaults (explicit flags
        /// still win).
        #[arg(long, value_enum)]
        preset: Option<Preset>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of MOM,MLE,SAM,RSA.
        #[arg(long, default_value = "MOM,MLE,SAM,RSA")]
        methods: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Asymptotic-variance curves for plotting.
    Avar {
        /// Alpha range as start:stop:step.
        #[arg(long, default_value = "0.1:3:0.05")]
        alpha_range: String,
        /// Comma-separated beta values.
        #[arg(long, default_value = "0.5,1,3")]
        betas: String,
        /// Comma-separated subset of MOM,MLE,SAM,RSA.
        #[arg(long, default_value = "MOM,MLE,SAM,RSA")]
        methods: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Moment-oracle diagnostic dump: closed form vs quadrature for every
    /// moment key.
    Moments {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    /// n = 5 grid at full replication count.
    PaperFig2,
    /// n = 10 grid at full replication count.
    PaperFig3,
    /// n = 20 grid at full replication count.
    PaperFig4,
    /// Desk-scale grid for continuous integration.
    Ci,
}

/// Errors carrying the process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn degenerate(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DEGENERATE,
            message: message.into(),
        }
    }
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Fit {
            input,
            methods,
            output,
        } => cmd_fit(input, &methods, output),
        Cmd::Simulate {
            alpha_grid,
            beta_grid,
            n_grid,
            reps,
            preset,
            seed,
            methods,
            output,
        } => cmd_simulate(
            &alpha_grid,
            &beta_grid,
            &n_grid,
            reps,
            preset,
            seed,
            &methods,
            output,
        ),
        Cmd::Avar {
            alpha_range,
            betas,
            methods,
            output,
        } => cmd_avar(&alpha_range, &betas, &methods, output),
        Cmd::Moments {
            alpha,
            beta,
            output,
        } => cmd_moments(alpha, beta, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn write_output(output: Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(&path, content)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn parse_methods(s: &str) -> Result<Vec<Method>, CliError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let m = Method::parse(part)
            .ok_or_else(|| CliError::usage(format!("unknown method '{}'", part.trim())))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if out.is_empty() {
        return Err(CliError::usage("no methods selected"));
    }
    Ok(out)
}

/// Parses "start:stop:step" or a comma list into an ordered grid of reals.
fn parse_real_grid(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: &str| CliError::usage(format!("invalid {flag} '{s}': {msg}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("unparseable start"))?;
        let stop: f64 = parts[1].parse().map_err(|_| bad("unparseable stop"))?;
        let step: f64 = parts[2].parse().map_err(|_| bad("unparseable step"))?;
        if !(step > 0.0) || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        // Grid points are computed multiplicatively so that e.g.
        // 0.1:3:0.1 lands on clean values, not accumulated sums.
        let grid: Vec<f64> = (0..count)
            .map(|i| start + i as f64 * step)
            .filter(|&v| v <= stop + step * 1e-9)
            .collect();
        if grid.is_empty() {
            return Err(bad("empty grid"));
        }
        Ok(grid)
    } else {
        let grid: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
        let grid = grid.map_err(|_| bad("unparseable value"))?;
        if grid.is_empty() {
            return Err(bad("empty grid"));
        }
        Ok(grid)
    }
}

fn parse_positive_grid(s: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let grid = parse_real_grid(s, flag)?;
    if grid.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(CliError::usage(format!(
            "invalid {flag} '{s}': values must be positive"
        )));
    }
    Ok(grid)
}

fn parse_n_grid(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = |msg: &str| CliError::usage(format!("invalid --n-grid '{s}': {msg}"));
    let grid = parse_real_grid(s, "--n-grid")?;
    let mut out = Vec::with_capacity(grid.len());
    for v in grid {
        if v < 1.0 || v.fract() != 0.0 {
            return Err(bad("sample sizes must be positive integers"));
        }
        out.push(v as usize);
    }
    Ok(out)
}

fn cmd_fit(
    input: Option<PathBuf>,
    methods: &str,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let methods = parse_methods(methods)?;
    let text = match &input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::usage(format!("cannot read standard input: {e}")))?;
            buf
        }
    };
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line
            .parse()
            .map_err(|_| CliError::usage(format!("line {}: unparseable value '{line}'", idx + 1)))?;
        if !(v > 0.0 && v < 1.0) {
            return Err(CliError::usage(format!(
                "line {}: value {line} outside the open interval (0,1)",
                idx + 1
            )));
        }
        values.push(v);
    }
    if values.len() < 2 {
        return Err(CliError::usage("need at least 2 values to fit"));
    }
    let n = values.len();
    let sample = Sample::new(values).expect("values already validated");
    let stats = suff_stats(&sample);

    let mut out = String::from("method,alpha_hat,beta_hat,se_alpha,se_beta,converged,iterations\n");
    for method in methods {
        let r = fit_method(&stats, method).map_err(|e| CliError::degenerate(e.to_string()))?;
        let (se_a, se_b) = stderr(r.params, method, n).unwrap_or((f64::NAN, f64::NAN));
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            method.name(),
            fmt_real(r.params.alpha()),
            fmt_real(r.params.beta()),
            fmt_real(se_a),
            fmt_real(se_b),
            r.converged,
            r.iterations,
        ));
    }
    write_output(output, &out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    alpha_grid: &str,
    beta_grid: &str,
    n_grid: &str,
    reps: usize,
    preset: Option<Preset>,
    seed: u64,
    methods: &str,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    // A preset replaces whatever defaults were not explicitly overridden;
    // explicit flag values always take precedence over the preset.
    let (alpha_grid, beta_grid, n_grid, reps) = match preset {
        None => (
            alpha_grid.to_string(),
            beta_grid.to_string(),
            n_grid.to_string(),
            reps,
        ),
        Some(p) => {
            let (pa, pn, pr) = match p {
                Preset::PaperFig2 => ("0.1:3:0.1", "5", 10000),
                Preset::PaperFig3 => ("0.1:3:0.1", "10", 10000),
                Preset::PaperFig4 => ("0.1:3:0.1", "20", 10000),
                Preset::Ci => ("0.5,1,2,3", "5,20", 1000),
            };
            let pick = |explicit: &str, default: &str, preset_v: &str| {
                if explicit == default {
                    preset_v.to_string()
                } else {
                    explicit.to_string()
                }
            };
            (
                pick(alpha_grid, "0.1:3:0.1", pa),
                pick(beta_grid, "0.5,1,3", "0.5,1,3"),
                pick(n_grid, "5,10,20", pn),
                if reps == 10000 { pr } else { reps },
            )
        }
    };
    if reps < 1 {
        return Err(CliError::usage("--reps must be at least 1"));
    }
    let cfg = SimConfig {
        alpha_grid: parse_positive_grid(&alpha_grid, "--alpha-grid")?,
        beta_grid: parse_positive_grid(&beta_grid, "--beta-grid")?,
        n_grid: parse_n_grid(&n_grid)?,
        reps,
        seed,
        methods: parse_methods(methods)?,
    };
    let cells = run_grid(&cfg);
    write_output(output, &render_csv(&cells))
}

fn avar_for(p: BetaParams, method: Method) -> Cov2 {
    match method {
        Method::Mle => crlb(p),
        Method::Mom => acov_mom(p),
        Method::Sam => sigma1(p),
        Method::Rsa => sigma2_sandwich(p).unwrap_or(Cov2 {
            v_aa: f64::NAN,
            v_bb: f64::NAN,
            v_ab: f64::NAN,
        }),
    }
}

fn cmd_avar(
    alpha_range: &str,
    betas: &str,
    methods: &str,
    output: Option<PathBuf>,
) -> Result<(), CliError> {
    let alphas = parse_positive_grid(alpha_range, "--alpha-range")?;
    let betas = parse_positive_grid(betas, "--betas")?;
    let methods = parse_methods(methods)?;
    let mut out = String::from("alpha,beta,method,avar_alpha,avar_beta,avar_cross\n");
    for &alpha in &alphas {
        for &beta in &betas {
            let p = BetaParams::new(alpha, beta).expect("grid validated positive");
            for &method in &methods {
                let c = avar_for(p, method);
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_real(alpha),
                    fmt_real(beta),
                    method.name(),
                    fmt_real(c.v_aa),
                    fmt_real(c.v_bb),
                    fmt_real(c.v_ab),
                ));
            }
        }
    }
    write_output(output, &out)
}

fn cmd_moments(alpha: f64, beta: f64, output: Option<PathBuf>) -> Result<(), CliError> {
    let p = BetaParams::new(alpha, beta)
        .map_err(|_| CliError::usage("alpha and beta must be positive and finite"))?;
    let mut out = String::from("key,closed_form,quadrature,abs_diff\n");
    for key in MomentKey::ALL {
        let closed = exact_moment(p, key);
        let quad = quad_moment(p, key)
            .map_err(|e| CliError::usage(format!("{}: {e}", key.name())))?;
        out.push_str(&format!(
            "{},{},{},{}\n",
            key.name(),
            fmt_real(closed),
            fmt_real(quad),
            fmt_real((closed - quad).abs()),
        ));
    }
    write_output(output, &out)
}
