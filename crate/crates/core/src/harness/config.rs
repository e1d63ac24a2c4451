//! Simulation configuration and its TOML file format.
//!
//! ```toml
//! n = 16
//! replications = 20000
//! seed = 20200101
//! workers = 8            # optional, defaults to all cores
//! output = "results"     # optional
//!
//! [model]
//! sigma_m_sq = 1.44
//! sigma_0_sq = 4.0
//!
//! [bootstrap]
//! draws = 4000
//! alpha = 1.0
//!
//! [[dgp]]
//! name = "well_matching"
//! kind = "normal"
//! mean = 0.0
//! sd = 1.2               # or: variance = 1.44
//!
//! [[dgp]]
//! name = "skewed"
//! kind = "skew_normal"
//! location = -2.0
//! scale = 0.16
//! shape = 10.0
//! seed = 7               # optional per-DGP seed
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dgp::DgpSpec;
use crate::normal_model::ModelConfig;
use crate::{Error, Result};

/// Seed used by the built-in experiment configuration.
pub const DEFAULT_SEED: u64 = 20_200_101;

/// A DGP entry in the simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct DgpEntry {
    pub name: String,
    pub spec: DgpSpec,
    /// Seed for this DGP's replication streams.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub dgps: Vec<DgpEntry>,
    pub n: usize,
    pub replications: usize,
    pub bb_draws: usize,
    pub bb_alpha: f64,
    pub model: ModelConfig,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub output_path: Option<PathBuf>,
}

impl SimulationConfig {
    /// The three-DGP experiment: n = 16, 20 000 replications, 4 000 bootstrap
    /// draws with Dirichlet alpha = 1, sigma_m^2 = 1.2^2, sigma_0^2 = 2^2.
    pub fn paper_defaults() -> Self {
        let seed = DEFAULT_SEED;
        let dgps = vec![
            DgpEntry {
                name: "normal_well_matching".into(),
                spec: DgpSpec::Normal { mean: 0.0, sd: 1.2 },
                seed,
            },
            DgpEntry {
                name: "normal_under_dispersed".into(),
                spec: DgpSpec::Normal { mean: 2.0, sd: 0.1 },
                seed,
            },
            DgpEntry {
                name: "skew_normal_heavy_tailed".into(),
                spec: DgpSpec::SkewNormal {
                    location: -2.0,
                    scale: 0.16,
                    shape: 10.0,
                },
                seed,
            },
        ];
        Self {
            dgps,
            n: 16,
            replications: 20_000,
            bb_draws: 4_000,
            bb_alpha: 1.0,
            model: ModelConfig::new(1.2 * 1.2, 2.0 * 2.0).expect("valid constants"),
            seed,
            workers: None,
            output_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 4 {
            return Err(Error::InvalidArgument(format!("n must be >= 4, got {}", self.n)));
        }
        if self.replications < 2 {
            return Err(Error::InvalidArgument(format!(
                "replications must be >= 2, got {}",
                self.replications
            )));
        }
        if self.bb_draws < 2 {
            return Err(Error::InvalidArgument(format!(
                "bootstrap draws must be >= 2, got {}",
                self.bb_draws
            )));
        }
        if !(self.bb_alpha.is_finite() && self.bb_alpha > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "bootstrap alpha must be > 0, got {}",
                self.bb_alpha
            )));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be >= 1".into()));
        }
        for d in &self.dgps {
            d.spec.validated()?;
        }
        Ok(())
    }

    /// Replace the seed everywhere, including per-DGP seeds.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        for d in &mut self.dgps {
            d.seed = seed;
        }
        self
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(s).map_err(|e| Error::ConfigParse(e.to_string()))?;
        raw.into_config()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: usize,
    replications: usize,
    seed: Option<u64>,
    workers: Option<usize>,
    output: Option<PathBuf>,
    model: RawModel,
    bootstrap: Option<RawBootstrap>,
    #[serde(default)]
    dgp: Vec<RawDgp>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    sigma_m_sq: f64,
    sigma_0_sq: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBootstrap {
    draws: usize,
    alpha: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDgp {
    name: Option<String>,
    kind: String,
    seed: Option<u64>,
    mean: Option<f64>,
    sd: Option<f64>,
    variance: Option<f64>,
    location: Option<f64>,
    scale: Option<f64>,
    shape: Option<f64>,
}

fn required(v: Option<f64>, key: &str, idx: usize) -> Result<f64> {
    v.ok_or_else(|| Error::ConfigParse(format!("dgp #{}: missing '{key}'", idx + 1)))
}

impl RawDgp {
    fn into_spec(self, idx: usize) -> Result<DgpSpec> {
        match self.kind.as_str() {
            "normal" => {
                let mean = required(self.mean, "mean", idx)?;
                match (self.sd, self.variance) {
                    (Some(sd), None) => DgpSpec::normal(mean, sd),
                    (None, Some(var)) => DgpSpec::normal_with_variance(mean, var),
                    _ => Err(Error::ConfigParse(format!(
                        "dgp #{}: normal needs exactly one of 'sd' or 'variance'",
                        idx + 1
                    ))),
                }
            }
            "skew_normal" => DgpSpec::skew_normal(
                required(self.location, "location", idx)?,
                required(self.scale, "scale", idx)?,
                required(self.shape, "shape", idx)?,
            ),
            other => Err(Error::ConfigParse(format!("dgp #{}: unknown kind '{other}'", idx + 1))),
        }
    }
}

impl RawConfig {
    fn into_config(self) -> Result<SimulationConfig> {
        let seed = self.seed.unwrap_or(DEFAULT_SEED);
        let model = ModelConfig::new(self.model.sigma_m_sq, self.model.sigma_0_sq)?;
        let (bb_draws, bb_alpha) = match self.bootstrap {
            Some(b) => (b.draws, b.alpha.unwrap_or(1.0)),
            None => (4_000, 1.0),
        };
        let dgps = self
            .dgp
            .into_iter()
            .enumerate()
            .map(|(idx, raw)| {
                let name = raw.name.clone().unwrap_or_else(|| format!("dgp{}", idx + 1));
                let dgp_seed = raw.seed.unwrap_or(seed);
                Ok(DgpEntry {
                    name,
                    spec: raw.into_spec(idx)?,
                    seed: dgp_seed,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = SimulationConfig {
            dgps,
            n: self.n,
            replications: self.replications,
            bb_draws,
            bb_alpha,
            model,
            seed,
            workers: self.workers,
            output_path: self.output,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
