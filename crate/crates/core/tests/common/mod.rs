//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `mu^4`-hat by direct enumeration of all 4-combinations.
pub fn brute_force_mu4_power(y: &[f64]) -> f64 {
    let n = y.len();
    let mut sum = 0.0;
    let mut count = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    sum += y[i] * y[j] * y[k] * y[l];
                    count += 1;
                }
            }
        }
    }
    sum / count as f64
}

/// Same enumeration over `|y|`: the magnitude scale of the sum above.
pub fn brute_force_abs_scale(y: &[f64]) -> f64 {
    let abs: Vec<f64> = y.iter().map(|v| v.abs()).collect();
    brute_force_mu4_power(&abs)
}

/// Refit the conjugate posterior on all points except `i` and evaluate the
/// posterior predictive log density at `y[i]`.
pub fn refit_loo_log_density(sigma_m_sq: f64, sigma_0_sq: f64, y: &[f64], i: usize) -> f64 {
    let rest: Vec<f64> = y
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect();
    let precision = 1.0 / sigma_0_sq + rest.len() as f64 / sigma_m_sq;
    let post_var = 1.0 / precision;
    let post_mean = post_var * rest.iter().sum::<f64>() / sigma_m_sq;
    let pred_var = sigma_m_sq + post_var;
    let r = y[i] - post_mean;
    -0.5 * (2.0 * PI * pred_var).ln() - r * r / (2.0 * pred_var)
}

/// A finitely supported distribution; expectations over iid samples of it
/// can be computed exactly by enumeration.
#[derive(Debug, Clone)]
pub struct Discrete {
    pub values: Vec<f64>,
    pub probs: Vec<f64>,
}

impl Discrete {
    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.probs).map(|(v, p)| v * p).sum()
    }

    pub fn central(&self, r: i32) -> f64 {
        let m = self.mean();
        self.values
            .iter()
            .zip(&self.probs)
            .map(|(v, p)| p * (v - m).powi(r))
            .sum()
    }

    /// `(mu^2 sigma^2, sigma^4, mu mu_3, mu_4, mu^4)`.
    pub fn products(&self) -> [f64; 5] {
        let mu = self.mean();
        let s2 = self.central(2);
        [mu * mu * s2, s2 * s2, mu * self.central(3), self.central(4), mu.powi(4)]
    }

    /// `E[f(Y_1..Y_n)]` for iid draws, by summing over all `k^n` outcomes.
    pub fn expect<const M: usize>(&self, n: usize, f: impl Fn(&[f64]) -> [f64; M]) -> [f64; M] {
        let k = self.values.len();
        let mut idx = vec![0usize; n];
        let mut y = vec![0.0; n];
        let mut acc = [0.0; M];
        loop {
            let mut p = 1.0;
            for (slot, &i) in idx.iter().enumerate() {
                y[slot] = self.values[i];
                p *= self.probs[i];
            }
            for (a, v) in acc.iter_mut().zip(f(&y)) {
                *a += p * v;
            }
            let mut pos = 0;
            loop {
                if pos == n {
                    return acc;
                }
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Mean and standard error of the mean.
pub fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Sample variance of `values` and the standard error of that estimate,
/// `sqrt((m4 - s^4) / N)` with empirical central moments.
pub fn variance_with_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let m = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n;
    let m4 = values.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    (m2 * n / (n - 1.0), ((m4 - m2 * m2) / n).sqrt())
}

fn std_normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

fn std_normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Skew-normal density in its standard form, `2 phi(z) Phi(shape z)`.
pub fn std_skew_normal_pdf(z: f64, shape: f64) -> f64 {
    2.0 * std_normal_pdf(z) * std_normal_cdf(shape * z)
}

/// Composite Simpson integral of `f` over `[lo, hi]` with `steps` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, steps: usize) -> f64 {
    let h = (hi - lo) / steps as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..steps {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// `(mean, variance, mu3, mu4)` of a skew-normal by quadrature.
pub fn skew_normal_moments_by_quadrature(location: f64, scale: f64, shape: f64) -> [f64; 4] {
    let (lo, hi, steps) = (-14.0, 14.0, 200_000);
    let pdf = |z: f64| std_skew_normal_pdf(z, shape);
    let m1 = simpson(|z| z * pdf(z), lo, hi, steps);
    let c = |r: i32| simpson(|z| (z - m1).powi(r) * pdf(z), lo, hi, steps);
    [
        location + scale * m1,
        scale.powi(2) * c(2),
        scale.powi(3) * c(3),
        scale.powi(4) * c(4),
    ]
}
