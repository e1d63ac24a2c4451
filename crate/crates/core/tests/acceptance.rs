//! Acceptance criteria. Runs as a plain binary under `cargo test` and prints
//! one PASS/FAIL line per criterion; exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use common::{brute_force_abs_scale, brute_force_mu4_power, mean_se, refit_loo_log_density, variance_with_se};
use loocv_core::dgp::{sample, true_moments, true_products, DgpSpec};
use loocv_core::harness::config::{DgpEntry, SimulationConfig};
use loocv_core::harness::run::simulate_replications;
use loocv_core::harness::{emit_report, run_experiment, ReportFormat};
use loocv_core::moments::{estimate_moment_products, raw_moments, MomentProducts, Provenance};
use loocv_core::normal_model::{coefficients, loo_pointwise_elpd, Dataset, ModelConfig};
use loocv_core::rng::stream_rng;
use loocv_core::variance::{expected_naive, fold_moments, naive_variance, total_variance, unbiased_variance};
use rand::Rng;
use rand_distr::StandardNormal;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

const SEED: u64 = 20_200_101;

fn paper_cfg() -> SimulationConfig {
    SimulationConfig::paper_defaults()
}

fn paper_dgps() -> Vec<DgpEntry> {
    paper_cfg().dgps
}

fn analytic(cfg: &SimulationConfig, spec: &DgpSpec) -> (f64, f64) {
    let mp = true_products(&true_moments(spec));
    let coef = coefficients(&cfg.model, cfg.n - 1).unwrap();
    (
        total_variance(&coef, &mp, cfg.n).unwrap().value,
        expected_naive(&coef, &mp, cfg.n).unwrap(),
    )
}

/// Criteria 1 and 2 share one desk-scale run of the experiment.
fn desk_run() -> (Outcome, Outcome) {
    let mut cfg = paper_cfg();
    cfg.replications = 2_000;
    cfg.bb_draws = 500;
    let start = Instant::now();
    let report = run_experiment(&cfg).expect("experiment runs");
    let secs = start.elapsed().as_secs_f64();

    let mut ok1 = secs < 60.0;
    let mut ok2 = true;
    let mut d1 = format!("{secs:.2}s;");
    let mut d2 = String::new();
    for (i, d) in report.dgps.iter().enumerate() {
        let t = d.analytic_total_var;
        let u = &d.unbiased_bb;
        let contains = u.ci_low <= t && t <= u.ci_high;
        ok1 &= contains;
        d1 += &format!(
            " dgp{}: analytic {t:.6e} in [{:.6e}, {:.6e}] {};",
            i + 1,
            u.ci_low,
            u.ci_high,
            if contains { "yes" } else { "NO" }
        );

        let nb = &d.naive_bb;
        let want_below = i != 1;
        let direction = if want_below { nb.mean < t } else { nb.mean > t };
        let outside = t < nb.ci_low || t > nb.ci_high;
        ok2 &= direction && outside;
        d2 += &format!(
            " dgp{}: naive {:.6e} [{:.6e}, {:.6e}] {} analytic {t:.6e} (ratio {:.3});",
            i + 1,
            nb.mean,
            nb.ci_low,
            nb.ci_high,
            if want_below { "<" } else { ">" },
            (nb.mean / t).sqrt()
        );
    }
    (Outcome::new(ok1, d1), Outcome::new(ok2, d2))
}

fn criterion_3() -> Outcome {
    let mut cfg = paper_cfg();
    cfg.replications = 100_000;
    let mut ok = true;
    let mut detail = String::new();
    for (i, entry) in paper_dgps().iter().enumerate() {
        let records = simulate_replications(&cfg, i, entry).unwrap();
        let naive: Vec<f64> = records.iter().map(|r| r.naive_var).collect();
        let (m, se) = mean_se(&naive);
        let (_, expected) = analytic(&cfg, &entry.spec);
        let z = (m - expected) / se;
        ok &= z.abs() <= 3.0;
        detail += &format!(" dgp{}: mean {m:.6e} expected {expected:.6e} z={z:+.2};", i + 1);
    }
    Outcome::new(ok, detail)
}

fn criterion_4() -> Outcome {
    let mut cfg = paper_cfg();
    cfg.replications = 200_000;
    let mut ok = true;
    let mut detail = String::new();
    for i in [0usize, 2] {
        let entry = &paper_dgps()[i];
        let records = simulate_replications(&cfg, i, entry).unwrap();
        let elpd: Vec<f64> = records.iter().map(|r| r.elpd_hat).collect();
        let (v, se) = variance_with_se(&elpd);
        let (total, _) = analytic(&cfg, &entry.spec);
        let z = (v - total) / se;
        ok &= z.abs() <= 3.0;
        detail += &format!(" dgp{}: empirical {v:.6e} analytic {total:.6e} z={z:+.2};", i + 1);
    }
    Outcome::new(ok, detail)
}

fn criterion_5() -> Outcome {
    let mut rng = stream_rng(SEED, 5);
    let mut worst_decomp: f64 = 0.0;
    let mut worst_bias: f64 = 0.0;
    for _ in 0..20_000 {
        let sm = 10f64.powf(rng.random_range(-2.0..2.0));
        let s0 = 10f64.powf(rng.random_range(-2.0..2.0));
        let n = rng.random_range(4..200usize);
        let mp = MomentProducts {
            mu2_sigma2: rng.random_range(-5.0..5.0),
            sigma4: rng.random_range(-5.0..5.0),
            mu_mu3: rng.random_range(-5.0..5.0),
            mu4_central: rng.random_range(-5.0..5.0),
            mu4_power: rng.random_range(0.0..5.0),
            provenance: Provenance::True,
        };
        let cfg = ModelConfig::new(sm, s0).unwrap();
        let coef = coefficients(&cfg, n - 1).unwrap();
        let fm = fold_moments(&coef, &mp, n).unwrap();
        let total = total_variance(&coef, &mp, n).unwrap().value;
        let en = expected_naive(&coef, &mp, n).unwrap();
        let nf = n as f64;
        let combined = nf * fm.var_i + nf * (nf - 1.0) * fm.cov_ij;
        // Relative to the magnitude of the terms being combined.
        let scale = (nf * fm.var_i).abs() + (nf * (nf - 1.0) * fm.cov_ij).abs();
        worst_decomp = worst_decomp.max((total - combined).abs() / scale);
        let bias = en - total;
        let target = -nf * nf * fm.cov_ij;
        let bscale = en.abs() + total.abs();
        worst_bias = worst_bias.max((bias - target).abs() / bscale);
    }
    Outcome::new(
        worst_decomp <= 1e-12 && worst_bias <= 1e-12,
        format!(" 20000 random configs: worst decomposition rel {worst_decomp:.2e}, worst bias rel {worst_bias:.2e} (tol 1e-12)"),
    )
}

fn criterion_6() -> Outcome {
    let reps = 100_000;
    let mut ok = true;
    let mut worst_z: f64 = 0.0;
    let mut detail = String::new();
    for (di, entry) in paper_dgps().iter().enumerate() {
        let truth = true_products(&true_moments(&entry.spec));
        let target = [truth.mu2_sigma2, truth.sigma4, truth.mu_mu3, truth.mu4_central];
        for n in [4usize, 8, 16] {
            let mut cols = (0..4).map(|_| Vec::with_capacity(reps)).collect::<Vec<Vec<f64>>>();
            for rep in 0..reps {
                let mut rng = stream_rng(SEED + 6, ((di as u64) << 48) | ((n as u64) << 32) | rep as u64);
                let data = sample(&entry.spec, n, &mut rng).unwrap();
                let mp = estimate_moment_products(&raw_moments(&data).unwrap());
                for (c, v) in cols.iter_mut().zip([mp.mu2_sigma2, mp.sigma4, mp.mu_mu3, mp.mu4_central]) {
                    c.push(v);
                }
            }
            let mut zs = [0.0; 4];
            for (k, (c, t)) in cols.iter().zip(target).enumerate() {
                let (m, se) = mean_se(c);
                zs[k] = (m - t) / se;
                worst_z = worst_z.max(zs[k].abs());
                ok &= zs[k].abs() <= 4.0;
            }
            detail += &format!(
                " dgp{} n={n}: z=[{:+.2} {:+.2} {:+.2} {:+.2}];",
                di + 1,
                zs[0],
                zs[1],
                zs[2],
                zs[3]
            );
        }
    }
    Outcome::new(ok, format!(" worst |z| {worst_z:.2} (tol 4);{detail}"))
}

fn criterion_7() -> Outcome {
    let mut rng = stream_rng(SEED, 7);
    let mut worst_scaled: f64 = 0.0;
    let mut worst_plain: f64 = 0.0;
    for i in 0..1_000 {
        let n = 4 + i % 6;
        let shift = rng.random_range(-1.0..2.0);
        let y: Vec<f64> = (0..n).map(|_| shift + rng.sample::<f64, _>(StandardNormal)).collect();
        let fast = raw_moments(&Dataset::new(y.clone()).unwrap()).unwrap().mu4_power;
        let brute = brute_force_mu4_power(&y);
        let scale = brute_force_abs_scale(&y);
        worst_scaled = worst_scaled.max((fast - brute).abs() / scale);
        worst_plain = worst_plain.max((fast - brute).abs() / brute.abs());
    }
    Outcome::new(
        worst_scaled <= 1e-12 && worst_plain <= 1e-12,
        format!(
            " 1000 datasets n=4..9: worst relative error {worst_plain:.2e}, relative to sum|products| {worst_scaled:.2e} (tol 1e-12)"
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = stream_rng(SEED, 8);
    let mut worst: f64 = 0.0;
    for n in 2..=32usize {
        for _ in 0..50 {
            let sm = 10f64.powf(rng.random_range(-1.0..1.5));
            let s0 = 10f64.powf(rng.random_range(-1.0..1.5));
            let loc = rng.random_range(-3.0..3.0);
            let y: Vec<f64> = (0..n).map(|_| loc + 2.0 * rng.sample::<f64, _>(StandardNormal)).collect();
            let cfg = ModelConfig::new(sm, s0).unwrap();
            let pe = loo_pointwise_elpd(&cfg, &Dataset::new(y.clone()).unwrap()).unwrap();
            for i in 0..n {
                worst = worst.max((pe.values[i] - refit_loo_log_density(sm, s0, &y, i)).abs());
            }
        }
    }
    Outcome::new(worst <= 1e-10, format!(" n=2..32 x 50 datasets: worst abs error {worst:.2e} (tol 1e-10)"))
}

fn criterion_9() -> Outcome {
    let cfg = ModelConfig::new(1.44, 4.0).unwrap();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    for &c in &[0.0, 1.0, -2.0, 2.0, 7.3, -40.0] {
        for n in [4usize, 5, 16, 33] {
            let data = Dataset::new(vec![c; n]).unwrap();
            let mp = estimate_moment_products(&raw_moments(&data).unwrap());
            let scale = c.powi(4).max(1.0);
            for v in [mp.mu2_sigma2, mp.sigma4, mp.mu_mu3, mp.mu4_central] {
                worst = worst.max(v.abs() / scale);
            }
            let naive = naive_variance(&loo_pointwise_elpd(&cfg, &data).unwrap()).unwrap().value;
            let unb = unbiased_variance(&cfg, &data).unwrap().value;
            ok &= naive.abs() <= 1e-9 * scale && unb.abs() <= 1e-9 * scale;
        }
    }
    ok &= worst <= 1e-9;
    let coef = coefficients(&cfg, 15).unwrap();
    let zero = MomentProducts::zero(Provenance::True);
    let analytic_zero = total_variance(&coef, &zero, 16).unwrap().value == 0.0;
    let degenerate = true_products(&true_moments(&DgpSpec::normal(0.0, 1e-300).unwrap()));
    let tiny = total_variance(&coef, &degenerate, 16).unwrap().value;
    ok &= analytic_zero && tiny == 0.0;
    Outcome::new(
        ok,
        format!(" constant data: worst scaled product {worst:.2e}; analytic variance for zero products {}", if analytic_zero { "0" } else { "nonzero" }),
    )
}

fn criterion_10() -> Outcome {
    let mut base = paper_cfg();
    base.replications = 50;
    base.bb_draws = 100;
    let mut outputs = Vec::new();
    for w in [1usize, 4, 8] {
        let mut cfg = base.clone();
        cfg.workers = Some(w);
        let report = run_experiment(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_report(&report, dir.path(), ReportFormat::Csv).unwrap();
        let raw = std::fs::read(&paths[1]).unwrap();
        let summary = std::fs::read(&paths[0]).unwrap();
        outputs.push((w, raw, summary));
    }
    let same = outputs.windows(2).all(|p| p[0].1 == p[1].1 && p[0].2 == p[1].2);
    Outcome::new(
        same,
        format!(" raw.csv {} bytes; identical across workers 1/4/8: {same}", outputs[0].1.len()),
    )
}

fn main() {
    let start = Instant::now();
    let (c1, c2) = desk_run();
    let results = [
        (1, "unbiased BB interval contains analytic variance", c1),
        (2, "naive bias direction", c2),
        (3, "naive MC mean matches expected_naive", criterion_3()),
        (4, "empirical Var(elpd_loo) matches analytic variance", criterion_4()),
        (5, "decomposition and bias identities", criterion_5()),
        (6, "moment-product estimators unbiased", criterion_6()),
        (7, "mu4-hat equals brute-force enumeration", criterion_7()),
        (8, "pointwise elpd equals refit-and-evaluate", criterion_8()),
        (9, "trivial collapses", criterion_9()),
        (10, "determinism across worker counts", criterion_10()),
    ];
    let mut failed = 0;
    for (id, name, o) in &results {
        println!("[{}] criterion {id:>2}: {name}:{}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({:.1}s)",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
