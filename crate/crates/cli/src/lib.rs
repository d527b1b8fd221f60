//! Monte Carlo harness, CSV formatting, and the command-line front end for
//! the beta-distribution estimators in `betafit-core`.

pub mod cli;
pub mod format;
pub mod montecarlo;
