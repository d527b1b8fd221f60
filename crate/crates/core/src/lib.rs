//! Point estimation for the two-parameter beta distribution.
//!
//! This crate provides four estimators of the shape pair (α, β) from an
//! i.i.d. sample on the open unit interval:
//!
//! - `MOM`: Pearson's method of moments,
//! - `MLE`: maximum likelihood via damped Newton iteration on the score
//!   equations,
//! - `SAM`: the closed-form mixed-moment estimator built from the first
//!   moment equation and the log-moment covariance identity,
//! - `RSA`: the closed-form estimator obtained by solving the two auxiliary
//!   score equations of the generalized beta family at r = 1.
//!
//! Alongside the estimators it ships their exact asymptotic covariance
//! matrices ([`asymptotics`]), a closed-form moment oracle for the beta
//! distribution cross-checked by adaptive quadrature ([`betadist`]), and the
//! special functions everything else is built on ([`specfun`]).
//!
//! The crate is `no_std` (with `alloc`); all floating-point transcendentals
//! go through `libm`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod asymptotics;
pub mod betadist;
pub mod estimators;
pub mod quad;
pub mod specfun;

pub use asymptotics::{Cov2, Sigma2Parts, SingularGError};
pub use betadist::{BetaParams, MomentKey, Sample};
pub use estimators::{
    DegenerateReason, DegenerateSampleError, EstimateResult, Method, MleOptions, SufficientStats,
};
pub use quad::QuadError;

/// Argument outside the domain of an operation (e.g. a non-positive shape
/// parameter or a sample value outside the open unit interval).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainError;

impl core::fmt::Display for DomainError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "argument outside the valid domain")
    }
}

impl core::error::Error for DomainError {}
