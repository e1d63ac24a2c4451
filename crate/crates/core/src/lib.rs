//! Leave-one-out cross-validation for the fixed-variance conjugate normal
//! model: exact pointwise elpd, the naive and the unbiased estimators of the
//! sampling variance of the LOO-elpd sum, the analytic variance, and a
//! Monte Carlo harness that checks them against each other.
//!
//! Module layout:
//! - [`normal_model`]: posterior predictive coefficients and pointwise LOO-elpd.
//! - [`moments`]: sample raw moments and unbiased moment-product estimators.
//! - [`variance`]: naive, unbiased and analytic variance of the elpd sum.
//! - [`dgp`]: data-generating processes and their true moments.
//! - [`harness`]: simulation experiment, Bayesian bootstrap and report output.

pub mod dgp;
pub mod error;
pub mod harness;
pub mod moments;
pub mod normal_model;
pub mod rng;
pub mod summation;
pub mod variance;

pub use error::{Error, Result};
