//! Monte Carlo experiment over replications.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dgp::{sample, true_moments, true_products, DgpSpec, TrueMoments};
use crate::harness::bootstrap::{bayesian_bootstrap, BootstrapSummary};
use crate::harness::config::{DgpEntry, SimulationConfig};
use crate::normal_model::{coefficients, loo_pointwise_elpd, ModelConfig};
use crate::rng::{bootstrap_stream, replication_stream, stream_rng};
use crate::summation::{mean, pairwise_sum_by};
use crate::variance::{expected_naive, fold_moments, naive_variance, total_variance, unbiased_variance};
use crate::{Error, Result};

/// Estimates from one simulated dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicationRecord {
    pub rep: usize,
    pub elpd_hat: f64,
    pub naive_var: f64,
    pub unbiased_var: f64,
    pub negative_flag: bool,
}

/// A bootstrap summary on the `sqrt(x / analytic_total_var)` scale.
/// Entries are `None` where `x` is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqrtRatioSummary {
    pub mean: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

/// Plain Monte Carlo mean of a column with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnMoments {
    pub mean: f64,
    pub std_error: f64,
    pub variance: f64,
}

impl ColumnMoments {
    pub fn of(values: &[f64]) -> Self {
        let m = mean(values);
        let n = values.len() as f64;
        let variance = pairwise_sum_by(values, |v| (v - m) * (v - m)) / (n - 1.0);
        Self {
            mean: m,
            std_error: (variance / n).sqrt(),
            variance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpReport {
    pub name: String,
    pub spec: DgpSpec,
    pub seed: u64,
    pub true_moments: TrueMoments,
    pub analytic_total_var: f64,
    pub analytic_expected_naive: f64,
    pub analytic_var_i: f64,
    pub analytic_cov_ij: f64,
    pub naive_bb: BootstrapSummary,
    pub unbiased_bb: BootstrapSummary,
    pub naive_mc: ColumnMoments,
    pub unbiased_mc: ColumnMoments,
    /// Empirical variance of `elpd_hat` across replications.
    pub elpd_mc: ColumnMoments,
    pub sqrt_ratio_naive: SqrtRatioSummary,
    pub sqrt_ratio_unbiased: SqrtRatioSummary,
    pub sqrt_ratio_expected_naive: Option<f64>,
    /// Replications whose unbiased estimate was negative.
    pub negative_unbiased_count: usize,
    pub replications: Vec<ReplicationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub n: usize,
    pub replications: usize,
    pub bb_draws: usize,
    pub bb_alpha: f64,
    pub seed: u64,
    pub model: ModelConfig,
    pub dgps: Vec<DgpReport>,
}

/// `sqrt(x / reference)` for `x >= 0`.
pub fn sqrt_ratio(x: f64, reference: f64) -> Option<f64> {
    (x >= 0.0 && reference > 0.0).then(|| (x / reference).sqrt())
}

fn sqrt_summary(bb: &BootstrapSummary, reference: f64) -> SqrtRatioSummary {
    SqrtRatioSummary {
        mean: sqrt_ratio(bb.mean, reference),
        ci_low: sqrt_ratio(bb.ci_low, reference),
        ci_high: sqrt_ratio(bb.ci_high, reference),
    }
}

fn replicate(cfg: &SimulationConfig, dgp_idx: usize, entry: &DgpEntry, rep: usize) -> Result<ReplicationRecord> {
    let mut rng = stream_rng(entry.seed, replication_stream(dgp_idx, rep));
    let data = sample(&entry.spec, cfg.n, &mut rng)?;
    let pe = loo_pointwise_elpd(&cfg.model, &data)?;
    let naive = naive_variance(&pe)?;
    let unbiased = unbiased_variance(&cfg.model, &data)?;
    Ok(ReplicationRecord {
        rep,
        elpd_hat: pe.sum,
        naive_var: naive.value,
        unbiased_var: unbiased.value,
        negative_flag: unbiased.negative_flag,
    })
}

/// Simulate every replication of one DGP. Output order is replication order
/// regardless of how the work is scheduled.
pub fn simulate_replications(
    cfg: &SimulationConfig,
    dgp_idx: usize,
    entry: &DgpEntry,
) -> Result<Vec<ReplicationRecord>> {
    (0..cfg.replications)
        .into_par_iter()
        .map(|rep| {
            replicate(cfg, dgp_idx, entry, rep).map_err(|e| Error::Replication {
                dgp: entry.name.clone(),
                replication: rep,
                source: Box::new(e),
            })
        })
        .collect()
}

fn run_dgp(cfg: &SimulationConfig, dgp_idx: usize, entry: &DgpEntry) -> Result<DgpReport> {
    let records = simulate_replications(cfg, dgp_idx, entry)?;
    let naive: Vec<f64> = records.iter().map(|r| r.naive_var).collect();
    let unbiased: Vec<f64> = records.iter().map(|r| r.unbiased_var).collect();
    let elpd: Vec<f64> = records.iter().map(|r| r.elpd_hat).collect();

    let (naive_bb, unbiased_bb) = rayon::join(
        || {
            let mut rng = stream_rng(entry.seed, bootstrap_stream(dgp_idx, 0));
            bayesian_bootstrap(&naive, cfg.bb_draws, cfg.bb_alpha, &mut rng)
        },
        || {
            let mut rng = stream_rng(entry.seed, bootstrap_stream(dgp_idx, 1));
            bayesian_bootstrap(&unbiased, cfg.bb_draws, cfg.bb_alpha, &mut rng)
        },
    );
    let (naive_bb, unbiased_bb) = (naive_bb?, unbiased_bb?);

    let tm = true_moments(&entry.spec);
    let mp = true_products(&tm);
    let coef = coefficients(&cfg.model, cfg.n - 1)?;
    let total = total_variance(&coef, &mp, cfg.n)?.value;
    let exp_naive = expected_naive(&coef, &mp, cfg.n)?;
    let fm = fold_moments(&coef, &mp, cfg.n)?;

    Ok(DgpReport {
        name: entry.name.clone(),
        spec: entry.spec,
        seed: entry.seed,
        true_moments: tm,
        analytic_total_var: total,
        analytic_expected_naive: exp_naive,
        analytic_var_i: fm.var_i,
        analytic_cov_ij: fm.cov_ij,
        naive_mc: ColumnMoments::of(&naive),
        unbiased_mc: ColumnMoments::of(&unbiased),
        elpd_mc: ColumnMoments::of(&elpd),
        sqrt_ratio_naive: sqrt_summary(&naive_bb, total),
        sqrt_ratio_unbiased: sqrt_summary(&unbiased_bb, total),
        sqrt_ratio_expected_naive: sqrt_ratio(exp_naive, total),
        negative_unbiased_count: records.iter().filter(|r| r.negative_flag).count(),
        naive_bb,
        unbiased_bb,
        replications: records,
    })
}

/// Run the whole experiment.
///
/// With `cfg.workers = Some(w)` the work runs on a dedicated pool of `w`
/// threads; the result is identical for any `w`.
pub fn run_experiment(cfg: &SimulationConfig) -> Result<SimulationReport> {
    cfg.validate()?;
    let body = || -> Result<SimulationReport> {
        let dgps = cfg
            .dgps
            .iter()
            .enumerate()
            .map(|(idx, entry)| run_dgp(cfg, idx, entry))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimulationReport {
            n: cfg.n,
            replications: cfg.replications,
            bb_draws: cfg.bb_draws,
            bb_alpha: cfg.bb_alpha,
            seed: cfg.seed,
            model: cfg.model,
            dgps,
        })
    };
    match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    }
}
