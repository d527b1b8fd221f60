//! Closed-form asymptotic covariance matrices for the four estimators, plus
//! a GMM sandwich oracle for the refined score-adjusted estimator.
//!
//! All matrices are scaled so that the finite-sample covariance of an
//! estimator is approximately Σ/n. The RSA covariance is computed two ways:
//! [`sigma2_closed`] assembles a direct closed-form expression, while
//! [`sigma2_sandwich`] builds G⁻¹ Ω (G⁻¹)ᵀ from the quadrature-verified
//! moment oracle. The sandwich is the authoritative path: the closed form's
//! ρ scalar does not reproduce the sandwich value (see the cross-check
//! test), so every consumer of the RSA covariance uses the sandwich.

use crate::betadist::{exact_moment, BetaParams, MomentKey};
use crate::estimators::Method;
use crate::specfun::{digamma_raw, trigamma_raw};

/// Guard band around the removable singularities of the closed-form Σ₂
/// scalars (α or β in {1, 2}) inside which numeric limits are used.
const SINGULAR_GUARD: f64 = 1e-4;

/// Offset for the symmetric numeric limits.
const LIMIT_EPS: f64 = 1e-5;

/// Symmetric 2×2 covariance matrix (entries scaled by n).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cov2 {
    /// Asymptotic variance of the α-estimate (times n).
    pub v_aa: f64,
    /// Asymptotic variance of the β-estimate (times n).
    pub v_bb: f64,
    /// Cross term.
    pub v_ab: f64,
}

impl Cov2 {
    pub fn det(&self) -> f64 {
        self.v_aa * self.v_bb - self.v_ab * self.v_ab
    }

    /// True when the matrix is positive-definite.
    pub fn is_positive_definite(&self) -> bool {
        self.v_aa > 0.0 && self.det() > 0.0
    }
}

/// The scalars of the closed-form Σ₂ expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sigma2Parts {
    pub kappa_ab: f64,
    pub kappa_ba: f64,
    pub tau_ab: f64,
    pub tau_ba: f64,
    pub omega_ab: f64,
    pub omega_ba: f64,
    pub rho: f64,
}

/// G is numerically singular (determinant guard tripped); does not occur
/// for valid parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularGError;

impl core::fmt::Display for SingularGError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "GMM Jacobian matrix is numerically singular")
    }
}

impl core::error::Error for SingularGError {}

/// Inverse Fisher information (Cramér–Rao lower bound): the asymptotic
/// covariance of the MLE.
pub fn crlb(p: BetaParams) -> Cov2 {
    let ta = trigamma_raw(p.alpha());
    let tb = trigamma_raw(p.beta());
    let ts = trigamma_raw(p.alpha() + p.beta());
    let denom = ta * tb - (ta + tb) * ts;
    Cov2 {
        v_aa: (tb - ts) / denom,
        v_bb: (ta - ts) / denom,
        v_ab: ts / denom,
    }
}

fn mom_m(a: f64, b: f64) -> f64 {
    a * (1.0
        + (2.0 * b + 3.0) * a * a
        + (2.0 * b * b + 4.0 * b + 5.0) * b
        + (4.0 * b * b + 7.0 * b + 4.0) * a)
        / (b * (b + 1.0))
}

/// Asymptotic covariance of the method-of-moments estimator.
pub fn acov_mom(p: BetaParams) -> Cov2 {
    let a = p.alpha();
    let b = p.beta();
    let s = a + b;
    let pre = (a + 1.0) * (b + 1.0) * s / ((s + 1.0) * (s + 2.0) * (s + 3.0));
    Cov2 {
        v_aa: pre * mom_m(a, b),
        v_bb: pre * mom_m(b, a),
        v_ab: pre * (1.0 + s + 2.0 * s * s),
    }
}

/// Asymptotic covariance Σ₁ of the mixed-moment (SAM) estimator.
pub fn sigma1(p: BetaParams) -> Cov2 {
    let a = p.alpha();
    let b = p.beta();
    let s1 = trigamma_raw(a) + trigamma_raw(b);
    let pre = 1.0 / (a + b + 1.0);
    Cov2 {
        v_aa: pre * (a * a * a * b * s1 + a * a * (a + b + 1.0) - a * b),
        v_bb: pre * (a * b * b * b * s1 + b * b * (a + b + 1.0) - a * b),
        v_ab: pre * ((b - 1.0) * a * a + a * a * b * b * s1 + (a - 1.0) * b * b),
    }
}

fn raw_omega(a: f64, b: f64) -> f64 {
    let kappa = digamma_raw(a) - digamma_raw(a + b);
    b / (b - 2.0)
        + a * (a + b - 1.0) / (b - 2.0)
            * (trigamma_raw(a) - trigamma_raw(a + b) + kappa * kappa)
        + 2.0 * (2.0 * a + b - 1.0) / (b - 2.0) * kappa
}

/// ω_αβ of the closed-form Σ₂, with the removable singularity at β = 2
/// resolved by a symmetric numeric limit.
fn omega(a: f64, b: f64) -> f64 {
    if (b - 2.0).abs() < SINGULAR_GUARD {
        0.5 * (raw_omega(a, b - LIMIT_EPS) + raw_omega(a, b + LIMIT_EPS))
    } else {
        raw_omega(a, b)
    }
}

/// The κ/τ/ω/ρ scalars of the closed-form Σ₂ expression. τ values reuse the
/// moment oracle (τ_αβ = E[X ln X/(1−X)]), so their removable singularities
/// at β = 1 (resp. α = 1) are resolved by the oracle's limits.
pub fn sigma2_parts(p: BetaParams) -> Sigma2Parts {
    let a = p.alpha();
    let b = p.beta();
    let kappa_ab = digamma_raw(a) - digamma_raw(a + b);
    let kappa_ba = digamma_raw(b) - digamma_raw(a + b);
    let tau_ab = exact_moment(p, MomentKey::EG1X);
    let tau_ba = exact_moment(p, MomentKey::EG1Y);
    let rho = 1.0
        + tau_ab
        + tau_ba
        + (a + b + 1.0) * (trigamma_raw(a + b) - kappa_ab * kappa_ba);
    Sigma2Parts {
        kappa_ab,
        kappa_ba,
        tau_ab,
        tau_ba,
        omega_ab: omega(a, b),
        omega_ba: omega(b, a),
        rho,
    }
}

fn assemble_sandwich(
    kappa_ab: f64,
    kappa_ba: f64,
    tau_ab: f64,
    tau_ba: f64,
    omega_ab: f64,
    omega_ba: f64,
    rho: f64,
) -> Result<Cov2, SingularGError> {
    let det = kappa_ab * kappa_ba - tau_ab * tau_ba;
    if det.abs() <= 1e-14 {
        return Err(SingularGError);
    }
    // G⁻¹ for G = [κ_αβ, −τ_αβ; −τ_βα, κ_βα].
    let a11 = kappa_ba / det;
    let a12 = tau_ab / det;
    let a21 = tau_ba / det;
    let a22 = kappa_ab / det;
    Ok(Cov2 {
        v_aa: a11 * a11 * omega_ab + 2.0 * a11 * a12 * rho + a12 * a12 * omega_ba,
        v_bb: a21 * a21 * omega_ab + 2.0 * a21 * a22 * rho + a22 * a22 * omega_ba,
        v_ab: a11 * a21 * omega_ab + (a11 * a22 + a12 * a21) * rho + a12 * a22 * omega_ba,
    })
}

/// The closed-form Σ₂ assembled verbatim from [`sigma2_parts`]. Retained as
/// a cross-check against [`sigma2_sandwich`]; the two disagree (see module
/// docs), so this is not used by any consumer of the RSA covariance.
pub fn sigma2_closed(p: BetaParams) -> Cov2 {
    let s = sigma2_parts(p);
    assemble_sandwich(
        s.kappa_ab, s.kappa_ba, s.tau_ab, s.tau_ba, s.omega_ab, s.omega_ba, s.rho,
    )
    .expect("kappa/tau determinant is nonzero for valid parameters")
}

/// Authoritative asymptotic covariance of the RSA estimator: the GMM
/// sandwich G⁻¹ Ω (G⁻¹)ᵀ with every entry built from the quadrature-
/// verified moment oracle.
pub fn sigma2_sandwich(p: BetaParams) -> Result<Cov2, SingularGError> {
    let a = p.alpha();
    let b = p.beta();
    let kappa_ab = digamma_raw(a) - digamma_raw(a + b);
    let kappa_ba = digamma_raw(b) - digamma_raw(a + b);
    let tau_ab = exact_moment(p, MomentKey::EG1X);
    let tau_ba = exact_moment(p, MomentKey::EG1Y);

    // Ω entries: variances of the two estimating functions
    // 1 + α ln X − (β−1) G1X and 1 + β ln Y − (α−1) G1Y, and their
    // covariance, expanded over the moment oracle.
    let omega_ab = a * a * exact_moment(p, MomentKey::VarLnX)
        + (b - 1.0) * (b - 1.0) * exact_moment(p, MomentKey::VarG1X)
        - 2.0 * a * (b - 1.0) * exact_moment(p, MomentKey::CovLnXG1X);
    let omega_ba = b * b * exact_moment(p, MomentKey::VarLnY)
        + (a - 1.0) * (a - 1.0) * exact_moment(p, MomentKey::VarG1Y)
        - 2.0 * b * (a - 1.0) * exact_moment(p, MomentKey::CovLnYG1Y);
    let rho = a * b * exact_moment(p, MomentKey::CovLnXLnY)
        - a * (a - 1.0) * exact_moment(p, MomentKey::CovLnXG1Y)
        - b * (b - 1.0) * exact_moment(p, MomentKey::CovLnYG1X)
        + (a - 1.0) * (b - 1.0) * exact_moment(p, MomentKey::CovG1XG1Y);

    assemble_sandwich(kappa_ab, kappa_ba, tau_ab, tau_ba, omega_ab, omega_ba, rho)
}

/// Plug-in standard errors: square roots of the diagonal of the method's
/// asymptotic covariance at `p_hat`, divided by n.
pub fn stderr(p_hat: BetaParams, method: Method, n: usize) -> Result<(f64, f64), SingularGError> {
    let cov = match method {
        Method::Mle => crlb(p_hat),
        Method::Mom => acov_mom(p_hat),
        Method::Sam => sigma1(p_hat),
        Method::Rsa => sigma2_sandwich(p_hat)?,
    };
    let n = n as f64;
    Ok((libm::sqrt(cov.v_aa / n), libm::sqrt(cov.v_bb / n)))
}
