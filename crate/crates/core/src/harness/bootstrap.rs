//! Bayesian bootstrap of a mean.
//!
//! Each draw weights the values with `w ~ Dirichlet(alpha, ..., alpha)` and
//! records the weighted mean. Dirichlet weights are normalised independent
//! `Gamma(alpha, 1)` variates.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::summation::{mean, pairwise_sum};
use crate::{Error, Result};

/// Mean and 95% equal-tailed interval of the bootstrap draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub draws_used: usize,
}

/// Sample quantile with linear interpolation between order statistics.
/// `sorted` must be ascending and non-empty.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Draws of the Dirichlet-weighted mean.
pub fn bayesian_bootstrap_draws<R: Rng + ?Sized>(
    values: &[f64],
    draws: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if values.len() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            actual: values.len(),
        });
    }
    if draws < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 bootstrap draws, got {draws}")));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidArgument(format!("Dirichlet alpha must be > 0, got {alpha}")));
    }
    let gamma = Gamma::new(alpha, 1.0).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut weights = vec![0.0; values.len()];
    let mut weighted = vec![0.0; values.len()];
    let mut out = Vec::with_capacity(draws);
    for _ in 0..draws {
        for w in weights.iter_mut() {
            *w = gamma.sample(rng);
        }
        let total = pairwise_sum(&weights);
        for ((wv, w), v) in weighted.iter_mut().zip(&weights).zip(values) {
            *wv = w * v;
        }
        out.push(pairwise_sum(&weighted) / total);
    }
    Ok(out)
}

pub fn bayesian_bootstrap<R: Rng + ?Sized>(
    values: &[f64],
    draws: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<BootstrapSummary> {
    let mut d = bayesian_bootstrap_draws(values, draws, alpha, rng)?;
    let m = mean(&d);
    d.sort_by(f64::total_cmp);
    // Interpolated quantiles can straddle the mean by a rounding step when all
    // draws coincide.
    let ci_low = quantile_sorted(&d, 0.025).min(m);
    let ci_high = quantile_sorted(&d, 0.975).max(m);
    Ok(BootstrapSummary {
        mean: m,
        ci_low,
        ci_high,
        draws_used: d.len(),
    })
}
