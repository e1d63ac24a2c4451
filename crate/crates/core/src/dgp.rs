//! Data-generating processes for the simulation experiment and their
//! population moments.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::moments::{MomentProducts, Provenance};
use crate::normal_model::Dataset;
use crate::{Error, Result};

/// A data-generating distribution.
///
/// `Normal` is parameterised by standard deviation. `SkewNormal` uses the
/// Azzalini parameterisation: location `xi`, scale `omega`, shape `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DgpSpec {
    Normal { mean: f64, sd: f64 },
    SkewNormal { location: f64, scale: f64, shape: f64 },
}

impl DgpSpec {
    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::Normal { mean, sd }.validated()
    }

    /// Normal given its variance rather than its standard deviation.
    pub fn normal_with_variance(mean: f64, variance: f64) -> Result<Self> {
        if !(variance.is_finite() && variance > 0.0) {
            return Err(Error::InvalidDgp(format!("variance must be > 0, got {variance}")));
        }
        Self::normal(mean, variance.sqrt())
    }

    pub fn skew_normal(location: f64, scale: f64, shape: f64) -> Result<Self> {
        Self::SkewNormal {
            location,
            scale,
            shape,
        }
        .validated()
    }

    /// Checks parameters; used after deserialisation as well.
    pub fn validated(self) -> Result<Self> {
        let (params, spread): (&[f64], f64) = match &self {
            Self::Normal { mean, sd } => (&[*mean, *sd][..], *sd),
            Self::SkewNormal {
                location,
                scale,
                shape,
            } => (&[*location, *scale, *shape][..], *scale),
        };
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidDgp(format!("non-finite parameter in {self:?}")));
        }
        if spread <= 0.0 {
            return Err(Error::InvalidDgp(format!("scale must be > 0 in {self:?}")));
        }
        Ok(self)
    }

    /// Short human-readable label, e.g. `normal(0, 1.2)`.
    pub fn label(&self) -> String {
        match self {
            Self::Normal { mean, sd } => format!("normal({mean}, {sd})"),
            Self::SkewNormal {
                location,
                scale,
                shape,
            } => format!("skew_normal({location}, {scale}, {shape})"),
        }
    }

    /// One draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Normal { mean, sd } => {
                let z: f64 = rng.sample(StandardNormal);
                mean + sd * z
            }
            Self::SkewNormal {
                location,
                scale,
                shape,
            } => {
                let delta = skew_delta(shape);
                let z0: f64 = rng.sample(StandardNormal);
                let z1: f64 = rng.sample(StandardNormal);
                location + scale * (delta * z0.abs() + (1.0 - delta * delta).sqrt() * z1)
            }
        }
    }
}

fn skew_delta(shape: f64) -> f64 {
    shape / (1.0 + shape * shape).sqrt()
}

/// Mean, variance and third and fourth central moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrueMoments {
    pub mu: f64,
    pub sigma_sq: f64,
    pub mu3: f64,
    pub mu4: f64,
}

/// `n` independent draws.
pub fn sample<R: Rng + ?Sized>(spec: &DgpSpec, n: usize, rng: &mut R) -> Result<Dataset> {
    if n < 1 {
        return Err(Error::InvalidArgument("sample size must be >= 1".into()));
    }
    Dataset::new((0..n).map(|_| spec.draw(rng)).collect())
}

pub fn true_moments(spec: &DgpSpec) -> TrueMoments {
    match *spec {
        DgpSpec::Normal { mean, sd } => {
            let s2 = sd * sd;
            TrueMoments {
                mu: mean,
                sigma_sq: s2,
                mu3: 0.0,
                mu4: 3.0 * s2 * s2,
            }
        }
        DgpSpec::SkewNormal {
            location,
            scale,
            shape,
        } => {
            // m = E[|Z0|] delta; central moments of delta|Z0| + sqrt(1-delta^2) Z1.
            let m = (2.0 / PI).sqrt() * skew_delta(shape);
            let m2 = m * m;
            let w2 = scale * scale;
            TrueMoments {
                mu: location + scale * m,
                sigma_sq: w2 * (1.0 - m2),
                mu3: w2 * scale * 0.5 * (4.0 - PI) * m2 * m,
                mu4: w2 * w2 * (3.0 * (1.0 - m2).powi(2) + 2.0 * (PI - 3.0) * m2 * m2),
            }
        }
    }
}

/// Population moment products for the variance formulas.
pub fn true_products(tm: &TrueMoments) -> MomentProducts {
    let mu2 = tm.mu * tm.mu;
    MomentProducts {
        mu2_sigma2: mu2 * tm.sigma_sq,
        sigma4: tm.sigma_sq * tm.sigma_sq,
        mu_mu3: tm.mu * tm.mu3,
        mu4_central: tm.mu4,
        mu4_power: mu2 * mu2,
        provenance: Provenance::True,
    }
}
