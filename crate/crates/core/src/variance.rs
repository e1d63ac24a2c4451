//! Variance of the LOO-elpd sum: the naive estimator, the unbiased plug-in
//! estimator and the analytic value for known moment products.
//!
//! The analytic variance is linear in `(mu^2 sigma^2, sigma^4, mu mu_3, mu_4)`
//! with multipliers that depend on `n` and the coefficients `a, b, c` taken at
//! conditioning-set size `n - 1`. Substituting unbiased estimates of the
//! products gives an unbiased estimate of the variance.

use serde::{Deserialize, Serialize};

use crate::moments::{estimate_from_data, MomentProducts, Provenance, MIN_OBSERVATIONS};
use crate::normal_model::{coefficients, Dataset, ElpdCoefficients, ModelConfig, PointwiseElpd};
use crate::summation::{mean, pairwise_sum_by};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Naive,
    Unbiased,
    Analytic,
}

/// An estimate (or exact value) of `Var(elpd_loo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    pub value: f64,
    pub method: Method,
    pub negative_flag: bool,
}

impl VarianceEstimate {
    fn new(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            negative_flag: value < 0.0,
        }
    }

    /// `max(value, 0)`. Biased upwards when the raw value can be negative;
    /// intended only for reporting a standard error.
    pub fn clamped(&self) -> f64 {
        self.value.max(0.0)
    }
}

/// Variance of a single pointwise term and covariance between two distinct
/// terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldMoments {
    pub var_i: f64,
    pub cov_ij: f64,
}

/// `n/(n-1) * sum_i (elpd_i - mean)^2`.
pub fn naive_variance(pe: &PointwiseElpd) -> Result<VarianceEstimate> {
    let n = pe.len();
    if n < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            actual: n,
        });
    }
    let m = mean(&pe.values);
    let ss = pairwise_sum_by(&pe.values, |v| (v - m) * (v - m));
    let nf = n as f64;
    Ok(VarianceEstimate::new(nf / (nf - 1.0) * ss, Method::Naive))
}

fn check_inputs(coef: &ElpdCoefficients, n: usize) -> Result<()> {
    if n < MIN_OBSERVATIONS {
        return Err(Error::TooFewObservations {
            required: MIN_OBSERVATIONS,
            actual: n,
        });
    }
    if coef.k + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "coefficients must be taken at k = n - 1 = {}, got k = {}",
            n - 1,
            coef.k
        )));
    }
    Ok(())
}

/// `Var(elpd_i)` and `Cov(elpd_i, elpd_j)`, `i != j`.
pub fn fold_moments(coef: &ElpdCoefficients, mp: &MomentProducts, n: usize) -> Result<FoldMoments> {
    check_inputs(coef, n)?;
    let (a, b, c) = (coef.a, coef.b, coef.c);
    let nf = n as f64;
    let k = nf - 1.0;
    let k2 = k * k;
    let k3 = k2 * k;
    let k4 = k3 * k;

    let var_i = (4.0 * a * a + nf / k * b * b + 4.0 / k * c * c + 4.0 * a * b + 4.0 / k * b * c)
        * mp.mu2_sigma2
        + (-a * a + b * b / k + (2.0 * nf - 5.0) / k3 * c * c) * mp.sigma4
        + (4.0 * a * a + 4.0 / k2 * c * c + 2.0 * a * b + 2.0 / k2 * b * c) * mp.mu_mu3
        + (a * a + c * c / k3) * mp.mu4_central;

    let cov_ij = ((3.0 * nf - 4.0) / k2 * b * b
        + 4.0 * (nf - 2.0) / k2 * c * c
        + 4.0 / k * a * b
        + 8.0 / k * a * c
        + 4.0 * (2.0 * nf - 3.0) / k2 * b * c)
        * mp.mu2_sigma2
        + (b * b / k2 + (nf - 2.0) * (2.0 * nf - 7.0) / k4 * c * c - 2.0 / k2 * a * c
            + 4.0 * (nf - 2.0) / k3 * b * c)
            * mp.sigma4
        + (4.0 * (nf - 2.0) / k3 * c * c
            + 2.0 / k * a * b
            + 4.0 * nf / k2 * a * c
            + (4.0 * nf - 6.0) / k3 * b * c)
            * mp.mu_mu3
        + ((nf - 2.0) / k4 * c * c + 2.0 / k2 * a * c) * mp.mu4_central;

    Ok(FoldMoments { var_i, cov_ij })
}

/// Multipliers of `(mu^2 sigma^2, sigma^4, mu mu_3, mu_4)` in `Var(elpd_loo)`.
pub fn total_variance_weights(coef: &ElpdCoefficients, n: usize) -> Result<[f64; 4]> {
    check_inputs(coef, n)?;
    let (a, b, c) = (coef.a, coef.b, coef.c);
    let nf = n as f64;
    let k = nf - 1.0;
    let abc = a + b + c;
    Ok([
        4.0 * nf * abc * abc,
        -nf * a * a + 2.0 * nf / k * b * b + nf * (2.0 * nf - 3.0) * (nf - 3.0) / (k * k * k) * c * c
            - 2.0 * nf / k * a * c
            + 4.0 * nf * (nf - 2.0) / (k * k) * b * c,
        4.0 * nf * abc * (a * k + c) / k,
        nf * a * a + nf / (k * k) * c * c + 2.0 * nf / k * a * c,
    ])
}

/// `Var(elpd_loo)` as a linear combination of the moment products.
///
/// With true products this is the analytic variance; with estimated products
/// it is the unbiased estimate.
pub fn total_variance(coef: &ElpdCoefficients, mp: &MomentProducts, n: usize) -> Result<VarianceEstimate> {
    let [w_ms, w_s4, w_mm, w_m4] = total_variance_weights(coef, n)?;
    let value = w_ms * mp.mu2_sigma2 + w_s4 * mp.sigma4 + w_mm * mp.mu_mu3 + w_m4 * mp.mu4_central;
    let method = match mp.provenance {
        Provenance::True => Method::Analytic,
        Provenance::Estimated => Method::Unbiased,
    };
    Ok(VarianceEstimate::new(value, method))
}

/// Unbiased estimate of `Var(elpd_loo)` from a single dataset.
pub fn unbiased_variance(config: &ModelConfig, data: &Dataset) -> Result<VarianceEstimate> {
    let n = data.len();
    let (_, mp) = estimate_from_data(data)?;
    let coef = coefficients(config, n - 1)?;
    total_variance(&coef, &mp, n)
}

/// Expectation of the naive estimator, `n Var(elpd_i) - n Cov(elpd_i, elpd_j)`.
pub fn expected_naive(coef: &ElpdCoefficients, mp_true: &MomentProducts, n: usize) -> Result<f64> {
    if mp_true.provenance != Provenance::True {
        return Err(Error::InvalidArgument(
            "expected_naive needs true moment products".into(),
        ));
    }
    let fm = fold_moments(coef, mp_true, n)?;
    let nf = n as f64;
    Ok(nf * fm.var_i - nf * fm.cov_ij)
}

/// The `a, b, c` multipliers written directly in terms of the sample size `n`.
/// Equal to `coefficients(config, n - 1)`; used as a cross-check.
pub fn lemma_coefficients(config: &ModelConfig, n: usize) -> (f64, f64, f64) {
    let sm = config.sigma_m_sq();
    let s0 = config.sigma_0_sq();
    let nf = n as f64;
    let a = -0.5 * (sm + (nf - 1.0) * s0) / (sm * (sm + nf * s0));
    let b = (nf - 1.0) * s0 / (sm * (sm + nf * s0));
    let c = -0.5 * (nf - 1.0).powi(2) * s0 * s0
        / (sm * (sm + (nf - 1.0) * s0) * (sm + nf * s0));
    (a, b, c)
}
