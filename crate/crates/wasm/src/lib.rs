//! Browser bindings. Every export takes plain numbers or text and returns a
//! JSON string; errors surface as JS exceptions.

use loocv_core::dgp::{true_moments, true_products, DgpSpec, TrueMoments};
use loocv_core::harness::run::sqrt_ratio;
use loocv_core::harness::{run_experiment, DgpEntry, SimulationConfig};
use loocv_core::moments::estimate_from_data;
use loocv_core::normal_model::{coefficients, loo_pointwise_elpd, Dataset, ModelConfig};
use loocv_core::variance::{expected_naive, naive_variance, total_variance, unbiased_variance};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Res<T> = std::result::Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn to_js(r: Res<Value>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

fn parse_values(text: &str) -> Res<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

pub fn estimate_value(text: &str, sigma_m_sq: f64, sigma_0_sq: f64) -> Res<Value> {
    let config = ModelConfig::new(sigma_m_sq, sigma_0_sq).map_err(err)?;
    let data = Dataset::new(parse_values(text)?).map_err(err)?;
    let pe = loo_pointwise_elpd(&config, &data).map_err(err)?;
    let naive = naive_variance(&pe).map_err(err)?;
    let unbiased = unbiased_variance(&config, &data).map_err(err)?;
    let (_, mp) = estimate_from_data(&data).map_err(err)?;
    Ok(json!({
        "n": data.len(),
        "elpd_hat": pe.sum,
        "pointwise": pe.values,
        "naive_var": naive.value,
        "unbiased_var": unbiased.value,
        "negative_flag": unbiased.negative_flag,
        "products": mp,
    }))
}

pub fn analytic_curve_value(
    mu: f64,
    sigma_sq: f64,
    mu3: f64,
    mu4: f64,
    sigma_m_sq: f64,
    sigma_0_sq: f64,
    n_max: usize,
) -> Res<Value> {
    if !(sigma_sq >= 0.0 && mu4 >= sigma_sq * sigma_sq && mu.is_finite() && mu3.is_finite() && mu4.is_finite()) {
        return Err("moments must be finite with sigma^2 >= 0 and mu4 >= sigma^4".into());
    }
    if !(4..=10_000).contains(&n_max) {
        return Err(format!("n_max must be in 4..=10000, got {n_max}"));
    }
    let config = ModelConfig::new(sigma_m_sq, sigma_0_sq).map_err(err)?;
    let mp = true_products(&TrueMoments { mu, sigma_sq, mu3, mu4 });
    let points = (4..=n_max)
        .map(|n| {
            let coef = coefficients(&config, n - 1).map_err(err)?;
            let total = total_variance(&coef, &mp, n).map_err(err)?.value;
            let naive = expected_naive(&coef, &mp, n).map_err(err)?;
            Ok(json!({
                "n": n,
                "total_var": total,
                "expected_naive": naive,
                "sqrt_ratio": sqrt_ratio(naive, total),
            }))
        })
        .collect::<Res<Vec<_>>>()?;
    Ok(Value::Array(points))
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_value(
    kind: &str,
    p1: f64,
    p2: f64,
    p3: f64,
    n: usize,
    replications: usize,
    bb_draws: usize,
    seed: u64,
    sigma_m_sq: f64,
    sigma_0_sq: f64,
) -> Res<Value> {
    let spec = match kind {
        "normal" => DgpSpec::normal(p1, p2),
        "skew_normal" => DgpSpec::skew_normal(p1, p2, p3),
        other => return Err(format!("unknown dgp kind {other:?}")),
    }
    .map_err(err)?;
    if replications > 200_000 {
        return Err("at most 200000 replications in the browser".into());
    }
    let mut cfg = SimulationConfig::paper_defaults();
    cfg.dgps = vec![DgpEntry {
        name: spec.label(),
        spec,
        seed,
    }];
    cfg.n = n;
    cfg.replications = replications;
    cfg.bb_draws = bb_draws;
    cfg.seed = seed;
    cfg.model = ModelConfig::new(sigma_m_sq, sigma_0_sq).map_err(err)?;
    let report = run_experiment(&cfg).map_err(err)?;
    let d = &report.dgps[0];
    Ok(json!({
        "dgp": d.name,
        "true_moments": true_moments(&spec),
        "analytic_total_var": d.analytic_total_var,
        "analytic_expected_naive": d.analytic_expected_naive,
        "naive_bb": d.naive_bb,
        "unbiased_bb": d.unbiased_bb,
        "sqrt_ratio_naive": d.sqrt_ratio_naive,
        "sqrt_ratio_unbiased": d.sqrt_ratio_unbiased,
        "negative_unbiased_count": d.negative_unbiased_count,
        "naive": d.replications.iter().map(|r| r.naive_var).collect::<Vec<_>>(),
        "unbiased": d.replications.iter().map(|r| r.unbiased_var).collect::<Vec<_>>(),
    }))
}

/// LOO elpd, pointwise terms and both variance estimates for pasted data.
#[wasm_bindgen]
pub fn estimate(text: &str, sigma_m_sq: f64, sigma_0_sq: f64) -> Result<String, JsError> {
    to_js(estimate_value(text, sigma_m_sq, sigma_0_sq))
}

/// True variance and expected naive estimate for n = 4..=n_max.
#[wasm_bindgen]
pub fn analytic_curve(
    mu: f64,
    sigma_sq: f64,
    mu3: f64,
    mu4: f64,
    sigma_m_sq: f64,
    sigma_0_sq: f64,
    n_max: usize,
) -> Result<String, JsError> {
    to_js(analytic_curve_value(mu, sigma_sq, mu3, mu4, sigma_m_sq, sigma_0_sq, n_max))
}

/// Small Monte Carlo run for one DGP. `kind` is `normal` (mean, sd) or
/// `skew_normal` (location, scale, shape).
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen]
pub fn simulate(
    kind: &str,
    p1: f64,
    p2: f64,
    p3: f64,
    n: usize,
    replications: usize,
    bb_draws: usize,
    seed: u32,
    sigma_m_sq: f64,
    sigma_0_sq: f64,
) -> Result<String, JsError> {
    to_js(simulate_value(
        kind,
        p1,
        p2,
        p3,
        n,
        replications,
        bb_draws,
        seed as u64,
        sigma_m_sq,
        sigma_0_sq,
    ))
}
