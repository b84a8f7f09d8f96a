//! Two-sample Kolmogorov-Smirnov machinery.
//!
//! The distance is the largest vertical gap between the two empirical CDFs.
//! It is standardized by `sqrt(n_a * n_b / (n_a + n_b))` and turned into an
//! asymptotic p-value with the Kolmogorov survival function
//! `Q(l) = 2 * sum_{k>=1} (-1)^(k-1) * exp(-2 k^2 l^2)`.

use crate::error::{Error, Result};
use crate::model::DictionaryEntry;

/// Terms smaller than this end the survival series.
const SERIES_TOLERANCE: f64 = 1e-12;
/// Below this the statistic is treated as zero.
const LAMBDA_FLOOR: f64 = 1e-8;
const MAX_TERMS: u32 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult {
    pub distance: f64,
    pub lambda: f64,
    pub p_value: f64,
}

/// `sup_x |F_a(x) - F_b(x)|` for two ascending samples.
///
/// Equal values are consumed from both sides before the gap is measured, so
/// ties are evaluated at the right limit of each step. The gap is tracked as
/// the integer `|i*m - j*n|` and divided once, which keeps identical inputs
/// at exactly zero.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    debug_assert!(a.windows(2).all(|w| w[0] <= w[1]), "sample a not sorted");
    debug_assert!(b.windows(2).all(|w| w[0] <= w[1]), "sample b not sorted");

    let (n, m) = (a.len() as u64, b.len() as u64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut widest = 0u64;
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        let gap = (i as u64 * m).abs_diff(j as u64 * n);
        widest = widest.max(gap);
    }
    Ok(widest as f64 / (n * m) as f64)
}

/// Standardized statistic `D * sqrt(n_a n_b / (n_a + n_b))`.
pub fn ks_lambda(distance: f64, n_a: usize, n_b: usize) -> f64 {
    let (na, nb) = (n_a as f64, n_b as f64);
    distance * (na * nb / (na + nb)).sqrt()
}

/// Switch point between the two series representations of `Q`.
const JACOBI_SWITCH: f64 = 1.0;

/// Asymptotic Kolmogorov survival function `Q(lambda)`, clamped to `[0, 1]`.
///
/// For `lambda >= 1` the alternating series is summed until a term drops
/// below 1e-12. Below that its terms are all close to one and the partial
/// sums cancel down to ~1e-13 noise, which is enough to break monotonicity
/// in `lambda`; there the Jacobi-transformed form
/// `1 - sqrt(2 pi)/lambda * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 lambda^2))`
/// of the same function is used instead.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < LAMBDA_FLOOR {
        return 1.0;
    }
    let q = if lambda < JACOBI_SWITCH {
        let scale = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=MAX_TERMS {
            let odd = f64::from(2 * k - 1);
            let term = (-odd * odd * scale).exp();
            sum += term;
            if term < SERIES_TOLERANCE {
                break;
            }
        }
        1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * sum
    } else {
        let l2 = lambda * lambda;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in 1..=MAX_TERMS {
            let kf = f64::from(k);
            let term = (-2.0 * kf * kf * l2).exp();
            sum += sign * term;
            if term < SERIES_TOLERANCE {
                break;
            }
            sign = -sign;
        }
        2.0 * sum
    };
    q.clamp(0.0, 1.0)
}

pub fn ks_pvalue(distance: f64, n_a: usize, n_b: usize) -> f64 {
    kolmogorov_survival(ks_lambda(distance, n_a, n_b))
}

/// Full test on two ascending samples.
pub fn ks_test(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let distance = ks_distance(a, b)?;
    let lambda = ks_lambda(distance, a.len(), b.len());
    Ok(KsResult {
        distance,
        lambda,
        p_value: kolmogorov_survival(lambda),
    })
}

/// Whether a sorted candidate payload may be replaced by `entry`.
pub fn exchangeable(candidate: &[f64], entry: &DictionaryEntry, alpha: f64) -> Result<bool> {
    let stored = entry.sorted_body();
    if candidate.len() != stored.len() {
        return Err(Error::LengthMismatch {
            expected: stored.len(),
            actual: candidate.len(),
        });
    }
    Ok(ks_test(candidate, stored)?.p_value >= alpha)
}
