use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use loocv_core::dgp::{true_products, TrueMoments};
use loocv_core::harness::{emit_report, run_experiment, ReportFormat, SimulationConfig};
use loocv_core::moments::estimate_from_data;
use loocv_core::normal_model::{coefficients, loo_pointwise_elpd, Dataset, ModelConfig};
use loocv_core::variance::{expected_naive, fold_moments, naive_variance, total_variance, unbiased_variance};
use serde_json::json;

/// Exact LOO-CV elpd for the conjugate normal model and its variance estimators.
#[derive(Parser)]
#[command(name = "loocv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LOO elpd and both variance estimates for one dataset.
    Estimate(EstimateArgs),
    /// Variance of the LOO elpd sum from population moments.
    Analytic(AnalyticArgs),
    /// Run the Monte Carlo experiment and write summary and raw tables.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Observation variance of the model.
    #[arg(long, default_value_t = 1.44)]
    sigma_m_sq: f64,
    /// Prior variance of the mean.
    #[arg(long, default_value_t = 4.0)]
    sigma_0_sq: f64,
}

impl ModelArgs {
    fn config(&self) -> Result<ModelConfig> {
        Ok(ModelConfig::new(self.sigma_m_sq, self.sigma_0_sq)?)
    }
}

#[derive(Args)]
struct EstimateArgs {
    /// One value per line; a single-column CSV with a header also works.
    /// Use `-` for stdin.
    file: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    /// Emit raw moments and moment-product estimates instead.
    #[arg(long)]
    moments: bool,
}

#[derive(Args)]
struct AnalyticArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long)]
    sigma_sq: f64,
    /// Third central moment.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu3: f64,
    /// Fourth central moment; defaults to the normal value 3 sigma^4.
    #[arg(long)]
    mu4: Option<f64>,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => ReportFormat::Csv,
            Format::Json => ReportFormat::Json,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// TOML experiment description.
    #[arg(long, required_unless_present = "paper_defaults", conflicts_with = "paper_defaults")]
    config: Option<PathBuf>,
    /// Use the built-in three-DGP experiment.
    #[arg(long)]
    paper_defaults: bool,
    #[arg(long)]
    reps: Option<usize>,
    /// Bootstrap draws per estimator column.
    #[arg(long)]
    bb_draws: Option<usize>,
    /// Seed for every DGP, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory [default: config `output`, else `loocv-out`].
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.trim().trim_end_matches(',').trim().trim_matches('"');
        if field.is_empty() || field.starts_with('#') {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if values.is_empty() && i == 0 => {}
            Err(_) => bail!("line {}: not a number: {line:?}", i + 1),
        }
    }
    Ok(values)
}

fn read_dataset(path: &Path) -> Result<Dataset> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading stdin")?
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    Ok(Dataset::new(parse_values(&text)?)?)
}

fn estimate(args: &EstimateArgs) -> Result<serde_json::Value> {
    let data = read_dataset(&args.file)?;
    let config = args.model.config()?;
    if args.moments {
        let (rm, mp) = estimate_from_data(&data)?;
        return Ok(json!({
            "n": rm.n,
            "alpha1": rm.alpha1,
            "alpha2": rm.alpha2,
            "alpha3": rm.alpha3,
            "alpha4": rm.alpha4,
            "mu4_power": rm.mu4_power,
            "mu2_sigma2": mp.mu2_sigma2,
            "sigma4": mp.sigma4,
            "mu_mu3": mp.mu_mu3,
            "mu4_central": mp.mu4_central,
        }));
    }
    let pe = loo_pointwise_elpd(&config, &data)?;
    let naive = naive_variance(&pe)?;
    let unbiased = unbiased_variance(&config, &data)?;
    Ok(json!({
        "elpd_hat": pe.sum,
        "naive_var": naive.value,
        "unbiased_var": unbiased.value,
        "negative_flag": unbiased.negative_flag,
    }))
}

fn analytic(args: &AnalyticArgs) -> Result<serde_json::Value> {
    let mu4 = args.mu4.unwrap_or(3.0 * args.sigma_sq * args.sigma_sq);
    for (name, v) in [("mu", args.mu), ("sigma-sq", args.sigma_sq), ("mu3", args.mu3), ("mu4", mu4)] {
        if !v.is_finite() {
            bail!("--{name} must be finite, got {v}");
        }
    }
    if args.sigma_sq < 0.0 {
        bail!("--sigma-sq must be >= 0, got {}", args.sigma_sq);
    }
    if mu4 < args.sigma_sq * args.sigma_sq {
        bail!("--mu4 must be >= sigma^4 = {}, got {mu4}", args.sigma_sq * args.sigma_sq);
    }
    let config = args.model.config()?;
    let mp = true_products(&TrueMoments {
        mu: args.mu,
        sigma_sq: args.sigma_sq,
        mu3: args.mu3,
        mu4,
    });
    let coef = coefficients(&config, args.n.saturating_sub(1))?;
    let fm = fold_moments(&coef, &mp, args.n)?;
    Ok(json!({
        "total_var": total_variance(&coef, &mp, args.n)?.value,
        "var_i": fm.var_i,
        "cov_ij": fm.cov_ij,
        "expected_naive": expected_naive(&coef, &mp, args.n)?,
    }))
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(path) => SimulationConfig::from_file(path)?,
        None => SimulationConfig::paper_defaults(),
    };
    if let Some(reps) = args.reps {
        cfg.replications = reps;
    }
    if let Some(draws) = args.bb_draws {
        cfg.bb_draws = draws;
    }
    if let Some(seed) = args.seed {
        cfg = cfg.with_seed(seed);
    }
    if args.workers.is_some() {
        cfg.workers = args.workers;
    }
    let out = args
        .out
        .clone()
        .or_else(|| cfg.output_path.clone())
        .unwrap_or_else(|| PathBuf::from("loocv-out"));

    let report = run_experiment(&cfg)?;
    for d in &report.dgps {
        eprintln!(
            "{:<28} analytic {:.6e}  naive {:.6e} [{:.6e}, {:.6e}]  unbiased {:.6e} [{:.6e}, {:.6e}]  negative {}",
            d.name,
            d.analytic_total_var,
            d.naive_bb.mean,
            d.naive_bb.ci_low,
            d.naive_bb.ci_high,
            d.unbiased_bb.mean,
            d.unbiased_bb.ci_low,
            d.unbiased_bb.ci_high,
            d.negative_unbiased_count,
        );
    }
    for path in emit_report(&report, &out, args.format.into())? {
        println!("{}", path.display());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate(args) => println!("{}", serde_json::to_string_pretty(&estimate(&args)?)?),
        Command::Analytic(args) => println!("{}", serde_json::to_string_pretty(&analytic(&args)?)?),
        Command::Simulate(args) => simulate(&args)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
