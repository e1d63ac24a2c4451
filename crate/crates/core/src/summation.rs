//! Pairwise (tree) summation.
//!
//! The tree shape depends only on the slice length, so results are
//! reproducible for a given input order.

const BLOCK: usize = 8;

/// Sum of `values` using pairwise reduction.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |acc, v| acc + v);
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of `f(v)` over `values` without allocating for short inputs.
pub fn pairwise_sum_by<F>(values: &[f64], f: F) -> f64
where
    F: Fn(f64) -> f64 + Copy,
{
    if values.len() <= BLOCK {
        return values.iter().fold(0.0, |acc, &v| acc + f(v));
    }
    let mid = values.len() / 2;
    pairwise_sum_by(&values[..mid], f) + pairwise_sum_by(&values[mid..], f)
}

/// Arithmetic mean via pairwise summation. Returns NaN for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    pairwise_sum(values) / values.len() as f64
}
