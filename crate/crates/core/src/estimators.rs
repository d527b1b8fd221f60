//! The four point estimators, all consuming one shared sufficient-statistics
//! pass over the sample.
//!
//! - [`fit_mom`]: Pearson's method of moments (first and second moments).
//! - [`fit_sam`]: closed form from the first-moment equation plus the
//!   log-moment covariance identity
//!   Cov(X, ln X) + Cov(Y, ln Y) = 1/(α+β).
//! - [`fit_rsa`]: closed form solving the two auxiliary score equations of
//!   the generalized beta family at r = 1.
//! - [`fit_mle`]: maximum likelihood by damped Newton iteration on the
//!   score equations with the exact trigamma Jacobian.

use crate::betadist::{BetaParams, Sample};
use crate::specfun::{digamma_raw, trigamma_raw};

/// Sample variance below this is treated as "all observations equal".
const DEGENERATE_VAR: f64 = 1e-15;

/// Iterates whose parameter sum exceeds this are abandoned as diverging
/// toward the degenerate boundary of the likelihood.
const MLE_PARAM_SUM_LIMIT: f64 = 1e8;

/// Why a sample cannot be fitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateReason {
    /// Fewer than two distinct values (zero sample variance).
    AllEqual,
    /// Fewer than two observations.
    TooSmall,
}

/// The sample has fewer than two distinct observations, so none of the
/// estimators is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegenerateSampleError {
    pub reason: DegenerateReason,
}

impl core::fmt::Display for DegenerateSampleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.reason {
            DegenerateReason::AllEqual => write!(f, "degenerate sample: all observations equal"),
            DegenerateReason::TooSmall => {
                write!(f, "degenerate sample: at least two observations required")
            }
        }
    }
}

impl core::error::Error for DegenerateSampleError {}

/// Estimator tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Mom,
    Mle,
    Sam,
    Rsa,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mom, Method::Mle, Method::Sam, Method::Rsa];

    pub fn name(self) -> &'static str {
        match self {
            Method::Mom => "MOM",
            Method::Mle => "MLE",
            Method::Sam => "SAM",
            Method::Rsa => "RSA",
        }
    }

    /// Parses the uppercase/lowercase tag.
    pub fn parse(s: &str) -> Option<Method> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MOM" => Some(Method::Mom),
            "MLE" => Some(Method::Mle),
            "SAM" => Some(Method::Sam),
            "RSA" => Some(Method::Rsa),
            _ => None,
        }
    }
}

/// All sample means the estimators consume, computed in a single pass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SufficientStats {
    pub n: usize,
    /// Mean of X.
    pub mean_x: f64,
    /// Mean of X².
    pub mean_x2: f64,
    /// Mean of ln X.
    pub mean_lnx: f64,
    /// Mean of ln Y, Y = 1 − X.
    pub mean_lny: f64,
    /// Mean of X ln X.
    pub mean_xlnx: f64,
    /// Mean of Y ln Y.
    pub mean_ylny: f64,
    /// Mean of X ln X/(1 − X).
    pub m_x: f64,
    /// Mean of Y ln Y/(1 − Y).
    pub m_y: f64,
}

impl SufficientStats {
    /// Sample variance of X (biased, divisor n).
    pub fn var_x(&self) -> f64 {
        self.mean_x2 - self.mean_x * self.mean_x
    }
}

/// Estimator output: parameter pair, method tag, and convergence
/// diagnostics (`iterations` and `score_norm` are nonzero only for MLE).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub params: BetaParams,
    pub method: Method,
    pub converged: bool,
    pub iterations: u32,
    pub score_norm: f64,
}

/// Computes all nine sufficient means in one pass. The sample type already
/// guarantees every value lies in the open unit interval.
pub fn suff_stats(s: &Sample) -> SufficientStats {
    let n = s.len();
    let mut sx = 0.0;
    let mut sx2 = 0.0;
    let mut slnx = 0.0;
    let mut slny = 0.0;
    let mut sxlnx = 0.0;
    let mut sylny = 0.0;
    let mut sgx = 0.0;
    let mut sgy = 0.0;
    for &x in s.values() {
        let y = 1.0 - x;
        let lnx = libm::log(x);
        let lny = libm::log1p(-x);
        sx += x;
        sx2 += x * x;
        slnx += lnx;
        slny += lny;
        sxlnx += x * lnx;
        sylny += y * lny;
        sgx += x * lnx / y;
        sgy += y * lny / x;
    }
    let inv = 1.0 / n as f64;
    SufficientStats {
        n,
        mean_x: sx * inv,
        mean_x2: sx2 * inv,
        mean_lnx: slnx * inv,
        mean_lny: slny * inv,
        mean_xlnx: sxlnx * inv,
        mean_ylny: sylny * inv,
        m_x: sgx * inv,
        m_y: sgy * inv,
    }
}

fn check_nondegenerate(stats: &SufficientStats) -> Result<(), DegenerateSampleError> {
    if stats.n < 2 {
        return Err(DegenerateSampleError {
            reason: DegenerateReason::TooSmall,
        });
    }
    if stats.var_x() < DEGENERATE_VAR {
        return Err(DegenerateSampleError {
            reason: DegenerateReason::AllEqual,
        });
    }
    Ok(())
}

fn closed_form_result(
    alpha: f64,
    beta: f64,
    method: Method,
) -> Result<EstimateResult, DegenerateSampleError> {
    // A non-positive or non-finite estimate means the sample sits at the
    // edge of the estimator's domain (e.g. a vanishing denominator), which
    // is the same failure mode as an effectively constant sample.
    let params = BetaParams::new(alpha, beta).map_err(|_| DegenerateSampleError {
        reason: DegenerateReason::AllEqual,
    })?;
    Ok(EstimateResult {
        params,
        method,
        converged: true,
        iterations: 0,
        score_norm: 0.0,
    })
}

/// Method-of-moments estimator.
pub fn fit_mom(stats: &SufficientStats) -> Result<EstimateResult, DegenerateSampleError> {
    check_nondegenerate(stats)?;
    let var = stats.var_x();
    let mean_y = 1.0 - stats.mean_x;
    let mean_y2 = 1.0 - 2.0 * stats.mean_x + stats.mean_x2;
    let alpha = stats.mean_x * (stats.mean_x - stats.mean_x2) / var;
    let beta = mean_y * (mean_y - mean_y2) / var;
    closed_form_result(alpha, beta, Method::Mom)
}

/// Mixed-moment closed-form estimator.
pub fn fit_sam(stats: &SufficientStats) -> Result<EstimateResult, DegenerateSampleError> {
    check_nondegenerate(stats)?;
    let mean_y = 1.0 - stats.mean_x;
    let gamma = stats.mean_xlnx - stats.mean_x * stats.mean_lnx + stats.mean_ylny
        - mean_y * stats.mean_lny;
    if gamma <= 0.0 {
        return Err(DegenerateSampleError {
            reason: DegenerateReason::AllEqual,
        });
    }
    closed_form_result(stats.mean_x / gamma, mean_y / gamma, Method::Sam)
}

/// Refined score-adjusted closed-form estimator.
pub fn fit_rsa(stats: &SufficientStats) -> Result<EstimateResult, DegenerateSampleError> {
    check_nondegenerate(stats)?;
    let d = stats.m_x * stats.m_y - stats.mean_lnx * stats.mean_lny;
    if d >= 0.0 {
        return Err(DegenerateSampleError {
            reason: DegenerateReason::AllEqual,
        });
    }
    let alpha = ((1.0 + stats.m_x) * stats.mean_lny + (1.0 + stats.m_y) * stats.m_x) / d;
    let beta = ((1.0 + stats.m_y) * stats.mean_lnx + (1.0 + stats.m_x) * stats.m_y) / d;
    closed_form_result(alpha, beta, Method::Rsa)
}

/// Solver options for [`fit_mle`].
#[derive(Debug, Clone, Copy)]
pub struct MleOptions {
    pub max_iter: u32,
    /// Convergence threshold on the max-norm of the score.
    pub tol: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            max_iter: 100,
            tol: 1e-10,
        }
    }
}

/// Maximum likelihood via damped Newton iteration with the exact trigamma
/// Jacobian. Starts from the method-of-moments estimate (falling back to
/// the RSA estimate if that is degenerate); each step is halved (up to 30
/// times) until the iterate stays in the positive orthant and the score
/// max-norm decreases. Non-convergence is reported through the `converged`
/// flag, never as a panic.
pub fn fit_mle(
    stats: &SufficientStats,
    opts: MleOptions,
) -> Result<EstimateResult, DegenerateSampleError> {
    check_nondegenerate(stats)?;
    let start = fit_mom(stats).or_else(|_| fit_rsa(stats))?;
    let mut a = start.params.alpha();
    let mut b = start.params.beta();

    let score = |a: f64, b: f64| {
        let dab = digamma_raw(a + b);
        (
            stats.mean_lnx + dab - digamma_raw(a),
            stats.mean_lny + dab - digamma_raw(b),
        )
    };
    let norm2 = |f1: f64, f2: f64| f1.abs().max(f2.abs());

    let (mut f1, mut f2) = score(a, b);
    let mut norm = norm2(f1, f2);
    let mut iterations = 0;
    let mut converged = norm < opts.tol;

    while !converged && iterations < opts.max_iter {
        if !(norm.is_finite()) || a + b > MLE_PARAM_SUM_LIMIT {
            break;
        }
        let tab = trigamma_raw(a + b);
        let j11 = tab - trigamma_raw(a);
        let j22 = tab - trigamma_raw(b);
        let det = j11 * j22 - tab * tab;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        // Newton step solves J · d = −f.
        let da = (-f1 * j22 + f2 * tab) / det;
        let db = (-f2 * j11 + f1 * tab) / det;

        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let na = a + lambda * da;
            let nb = b + lambda * db;
            if na > 0.0 && nb > 0.0 {
                let (nf1, nf2) = score(na, nb);
                let nnorm = norm2(nf1, nf2);
                if nnorm < norm {
                    a = na;
                    b = nb;
                    f1 = nf1;
                    f2 = nf2;
                    norm = nnorm;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        iterations += 1;
        if !accepted {
            break;
        }
        converged = norm < opts.tol;
    }

    Ok(EstimateResult {
        params: BetaParams::new(a, b).expect("MLE iterates stay positive"),
        method: Method::Mle,
        converged,
        iterations,
        score_norm: norm,
    })
}

/// Dispatches to the estimator for `method` with default MLE options.
pub fn fit_method(
    stats: &SufficientStats,
    method: Method,
) -> Result<EstimateResult, DegenerateSampleError> {
    match method {
        Method::Mom => fit_mom(stats),
        Method::Sam => fit_sam(stats),
        Method::Rsa => fit_rsa(stats),
        Method::Mle => fit_mle(stats, MleOptions::default()),
    }
}
