//! Conjugate normal model with fixed data variance and a zero-mean normal
//! prior on the location:
//!
//! ```text
//! y | theta ~ N(theta, sigma_m^2),    theta ~ N(0, sigma_0^2)
//! ```
//!
//! After conditioning on `k` observations with mean `ybar`, the posterior
//! predictive log density of a new point `yt` is the quadratic form
//! `a*yt^2 + b*yt*ybar + c*ybar^2 + d` with coefficients that depend only on `k`.

use serde::{Deserialize, Serialize};

use crate::summation::pairwise_sum;
use crate::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Fixed hyperparameters of the model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    sigma_m_sq: f64,
    sigma_0_sq: f64,
}

impl ModelConfig {
    pub fn new(sigma_m_sq: f64, sigma_0_sq: f64) -> Result<Self> {
        for (name, v) in [("sigma_m_sq", sigma_m_sq), ("sigma_0_sq", sigma_0_sq)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(Self {
            sigma_m_sq,
            sigma_0_sq,
        })
    }

    /// Data variance `sigma_m^2`.
    pub fn sigma_m_sq(&self) -> f64 {
        self.sigma_m_sq
    }

    /// Prior variance `sigma_0^2`.
    pub fn sigma_0_sq(&self) -> f64 {
        self.sigma_0_sq
    }
}

/// A sequence of finite observations.
///
/// Construction only checks that the data is non-empty and finite; each
/// operation enforces its own minimum size.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<f64>,
}

impl Dataset {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if y.is_empty() {
            return Err(Error::TooFewObservations {
                required: 1,
                actual: 0,
            });
        }
        if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { y })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn mean(&self) -> f64 {
        pairwise_sum(&self.y) / self.y.len() as f64
    }

    pub(crate) fn require_len(&self, required: usize) -> Result<()> {
        if self.y.len() < required {
            return Err(Error::TooFewObservations {
                required,
                actual: self.y.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for Dataset {
    type Error = Error;

    fn try_from(y: Vec<f64>) -> Result<Self> {
        Dataset::new(y)
    }
}

/// Coefficients of the posterior predictive log density after conditioning on
/// `k` observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElpdCoefficients {
    pub k: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// Posterior variance of the location.
    pub tau: f64,
    /// Posterior predictive variance, `sigma_m^2 + tau`.
    pub sigma_pp_sq: f64,
}

impl ElpdCoefficients {
    /// Posterior predictive mean given a conditioning-set mean `y_bar`.
    pub fn predictive_mean(&self, y_bar: f64) -> f64 {
        // b / (-2a) == tau * k / sigma_m^2
        -self.b / (2.0 * self.a) * y_bar
    }

    /// Value of the log density at its mode.
    pub fn log_peak(&self) -> f64 {
        -0.5 * (LN_2PI + self.sigma_pp_sq.ln())
    }
}

/// Coefficients from the simplified rational closed forms.
pub fn coefficients(config: &ModelConfig, k: usize) -> Result<ElpdCoefficients> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!(
            "conditioning-set size must be >= 1, got {k}"
        )));
    }
    let sm = config.sigma_m_sq;
    let s0 = config.sigma_0_sq;
    let kf = k as f64;
    let with_k = sm + kf * s0;
    let with_k1 = sm + (kf + 1.0) * s0;

    let tau = 1.0 / (1.0 / s0 + kf / sm);
    let a = -0.5 * with_k / (sm * with_k1);
    let b = kf * s0 / (sm * with_k1);
    let c = -0.5 * kf * kf * s0 * s0 / (sm * with_k * with_k1);
    let d = -0.5 * (LN_2PI + sm.ln() + (with_k1 / with_k).ln());
    Ok(ElpdCoefficients {
        k,
        a,
        b,
        c,
        d,
        tau,
        sigma_pp_sq: sm + tau,
    })
}

/// Coefficients through the posterior quantities `tau` and `sigma_pp^2`.
///
/// Algebraically identical to [`coefficients`]; kept as an independent route
/// for cross-checking.
pub fn coefficients_via_predictive(config: &ModelConfig, k: usize) -> Result<ElpdCoefficients> {
    if k < 1 {
        return Err(Error::InvalidArgument(format!(
            "conditioning-set size must be >= 1, got {k}"
        )));
    }
    let sm = config.sigma_m_sq;
    let kf = k as f64;
    let tau = 1.0 / (1.0 / config.sigma_0_sq + kf / sm);
    let spp = sm + tau;
    Ok(ElpdCoefficients {
        k,
        a: -1.0 / (2.0 * spp),
        b: tau * kf / (sm * spp),
        c: -tau * tau * kf * kf / (2.0 * sm * sm * spp),
        d: -0.5 * (LN_2PI + spp.ln()),
        tau,
        sigma_pp_sq: spp,
    })
}

/// `a*yt^2 + b*yt*ybar + c*ybar^2 + d`.
pub fn log_predictive_density(coef: &ElpdCoefficients, y_tilde: f64, y_bar: f64) -> f64 {
    coef.a * y_tilde * y_tilde + coef.b * y_tilde * y_bar + coef.c * y_bar * y_bar + coef.d
}

/// Log density of `N(mean, var)` at `x`.
pub fn normal_log_pdf(x: f64, mean: f64, var: f64) -> f64 {
    let r = x - mean;
    -0.5 * (LN_2PI + var.ln() + r * r / var)
}

/// Pointwise LOO predictive log densities and their sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointwiseElpd {
    pub values: Vec<f64>,
    pub sum: f64,
}

impl PointwiseElpd {
    pub fn from_values(values: Vec<f64>) -> Self {
        let sum = pairwise_sum(&values);
        Self { values, sum }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Leave-one-out means via `(n*ybar - y_i) / (n - 1)`, O(n).
pub fn loo_means(y: &[f64]) -> Vec<f64> {
    let n = y.len() as f64;
    let total = pairwise_sum(y);
    y.iter().map(|&yi| (total - yi) / (n - 1.0)).collect()
}

/// Leave-one-out means recomputed from scratch for each `i`, O(n^2).
pub fn loo_means_exact(y: &[f64]) -> Vec<f64> {
    let mut rest = Vec::with_capacity(y.len().saturating_sub(1));
    (0..y.len())
        .map(|i| {
            rest.clear();
            rest.extend(y.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
            pairwise_sum(&rest) / rest.len() as f64
        })
        .collect()
}

/// Closed-form pointwise LOO elpd, `a(n-1) y_i^2 + b(n-1) y_i ybar_{-i} + c(n-1) ybar_{-i}^2 + d(n-1)`.
pub fn loo_pointwise_elpd(config: &ModelConfig, data: &Dataset) -> Result<PointwiseElpd> {
    data.require_len(2)?;
    let coef = coefficients(config, data.len() - 1)?;
    let y = data.values();
    let values = y
        .iter()
        .zip(loo_means(y))
        .map(|(&yi, mean_rest)| log_predictive_density(&coef, yi, mean_rest))
        .collect();
    Ok(PointwiseElpd::from_values(values))
}
