//! Sample raw moments and unbiased estimators of the moment products
//! `mu^2 sigma^2`, `sigma^4`, `mu mu_3` and `mu_4`.
//!
//! All estimators are rational functions of the raw moments
//! `alpha_k = (1/n) sum y_i^k` and of an unbiased estimate of `mu^4`. The data
//! is not re-centred: the formulas are stated in raw moments and the targets
//! depend on the location.

use serde::{Deserialize, Serialize};

use crate::normal_model::Dataset;
use crate::summation::pairwise_sum_by;
use crate::Result;

/// Smallest sample size for which the estimators are defined.
pub const MIN_OBSERVATIONS: usize = 4;

/// Raw sample moments of a dataset plus the unbiased `mu^4` estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawMoments {
    pub n: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    pub alpha4: f64,
    /// Unbiased estimate of the fourth power of the mean.
    pub mu4_power: f64,
}

/// Whether a [`MomentProducts`] holds population values or sample estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    True,
    Estimated,
}

/// The moment products the variance of the LOO-elpd sum is linear in.
///
/// Estimated values may be negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentProducts {
    pub mu2_sigma2: f64,
    pub sigma4: f64,
    pub mu_mu3: f64,
    pub mu4_central: f64,
    pub mu4_power: f64,
    pub provenance: Provenance,
}

impl MomentProducts {
    /// All products zero, as for a point mass at the origin.
    pub fn zero(provenance: Provenance) -> Self {
        Self {
            mu2_sigma2: 0.0,
            sigma4: 0.0,
            mu_mu3: 0.0,
            mu4_central: 0.0,
            mu4_power: 0.0,
            provenance,
        }
    }

    /// Set when an estimated `sigma^4` came out negative.
    pub fn negative_sigma4(&self) -> bool {
        self.sigma4 < 0.0
    }
}

/// Elementary symmetric polynomials `e_1..e_4` of `y` by the recurrence
/// `e_k <- e_k + y_i e_{k-1}`, one pass over the data.
pub fn elementary_symmetric(y: &[f64]) -> [f64; 4] {
    let mut e = [1.0, 0.0, 0.0, 0.0, 0.0];
    for &v in y {
        for k in (1..5).rev() {
            e[k] += v * e[k - 1];
        }
    }
    [e[1], e[2], e[3], e[4]]
}

/// Elementary symmetric polynomials `e_1..e_4` from power sums `p_1..p_4`
/// using Newton's identities.
///
/// Exact in exact arithmetic but subtractive: near a cancelling `e_4` it
/// loses several more digits than [`elementary_symmetric`].
pub fn elementary_symmetric_from_power_sums(p: [f64; 4]) -> [f64; 4] {
    let [p1, p2, p3, p4] = p;
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let e4 = (e3 * p1 - e2 * p2 + e1 * p3 - p4) / 4.0;
    [e1, e2, e3, e4]
}

fn binomial4(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) * (n - 2.0) * (n - 3.0) / 24.0
}

pub fn raw_moments(data: &Dataset) -> Result<RawMoments> {
    data.require_len(MIN_OBSERVATIONS)?;
    let y = data.values();
    let n = y.len();
    let p1 = pairwise_sum_by(y, |v| v);
    let p2 = pairwise_sum_by(y, |v| v * v);
    let p3 = pairwise_sum_by(y, |v| v * v * v);
    let p4 = pairwise_sum_by(y, |v| (v * v) * (v * v));
    let e4 = elementary_symmetric(y)[3];
    let nf = n as f64;
    Ok(RawMoments {
        n,
        alpha1: p1 / nf,
        alpha2: p2 / nf,
        alpha3: p3 / nf,
        alpha4: p4 / nf,
        mu4_power: e4 / binomial4(n),
    })
}

/// Auxiliary estimator with expectation `mu_4 + 3 sigma^4`:
/// `n/(n-1) * (alpha4 - 4 alpha3 alpha1 + 3 alpha2^2)`.
pub fn fourth_moment_aux(rm: &RawMoments) -> f64 {
    let n = rm.n as f64;
    n / (n - 1.0) * (rm.alpha4 - 4.0 * rm.alpha3 * rm.alpha1 + 3.0 * rm.alpha2 * rm.alpha2)
}

/// Unbiased estimates of the four moment products.
pub fn estimate_moment_products(rm: &RawMoments) -> MomentProducts {
    let n = rm.n as f64;
    let n2 = n * n;
    let n3 = n2 * n;
    let n4 = n3 * n;
    let RawMoments {
        alpha1: a1,
        alpha2: a2,
        alpha3: a3,
        alpha4: a4,
        mu4_power,
        ..
    } = *rm;
    let a1_2 = a1 * a1;
    let a1_4 = a1_2 * a1_2;
    let a2_2 = a2 * a2;
    let denom = (n - 3.0) * (n - 2.0) * (n - 1.0);

    let mu2_sigma2 = (-n3 * a1_4 + 2.0 * n3 * a2 * a1_2 - 4.0 * (n - 1.0) * n * a3 * a1
        - (2.0 * n2 - 3.0 * n) * a2_2
        + 2.0 * (2.0 * n - 3.0) * a4)
        / (2.0 * denom)
        - 0.5 * mu4_power;

    let sigma4 = (n3 * a1_4 - 2.0 * n3 * a2 * a1_2
        + (n3 - 3.0 * n2 + 3.0 * n) * a2_2
        + 4.0 * n * (n - 1.0) * a3 * a1
        + n * (1.0 - n) * a4)
        / denom;

    let mu_mu3 = (-2.0 * (n2 + n - 3.0) * a4 - 6.0 * n3 * a1_2 * a2
        + n * (6.0 * n - 9.0) * a2_2
        + 3.0 * n3 * a1_4
        + 2.0 * n2 * (n + 1.0) * a1 * a3)
        / (2.0 * denom)
        + 0.5 * mu4_power;

    let mu4_central = (-3.0 * n4 * a1_4
        + 6.0 * n4 * a1_2 * a2
        + (9.0 - 6.0 * n) * n2 * a2_2
        + (-12.0 + 8.0 * n - 4.0 * n2) * n2 * a1 * a3
        + (3.0 * n - 2.0 * n2 + n3) * n * a4)
        / (denom * n);

    MomentProducts {
        mu2_sigma2,
        sigma4,
        mu_mu3,
        mu4_central,
        mu4_power,
        provenance: Provenance::Estimated,
    }
}

/// `raw_moments` followed by `estimate_moment_products`.
pub fn estimate_from_data(data: &Dataset) -> Result<(RawMoments, MomentProducts)> {
    let rm = raw_moments(data)?;
    Ok((rm, estimate_moment_products(&rm)))
}
