//! Reconstruction-quality measures, compression-ratio accounting, and
//! amplitude spectra.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::Mode;

/// Shape statistics of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    /// Strict interior local maxima.
    pub n_peaks: usize,
    /// Mean index distance between consecutive peaks; `None` with < 2 peaks.
    pub mean_peak_gap: Option<f64>,
    /// Mean absolute value difference between consecutive peaks.
    pub mean_peak_value_gap: Option<f64>,
    /// Mean absolute step `|x[i+1] - x[i]|`.
    pub mean_jump: f64,
    /// Steps larger than a tenth of the series range.
    pub n_big_jumps: usize,
    /// Percentage of samples outside the Tukey whiskers.
    pub pct_tukey_outliers: f64,
}

impl QualityReport {
    /// `(name, value)` rows in measure order; absent values are `None`.
    pub fn rows(&self) -> [(&'static str, Option<f64>); 6] {
        [
            ("n_peaks", Some(self.n_peaks as f64)),
            ("mean_peak_gap", self.mean_peak_gap),
            ("mean_peak_value_gap", self.mean_peak_value_gap),
            ("mean_jump", Some(self.mean_jump)),
            ("n_big_jumps", Some(self.n_big_jumps as f64)),
            ("pct_tukey_outliers", Some(self.pct_tukey_outliers)),
        ]
    }
}

pub fn measure(series: &[f64]) -> Result<QualityReport> {
    if series.len() < 3 {
        return Err(Error::SeriesTooShort {
            required: 3,
            actual: series.len(),
        });
    }
    let peaks: Vec<usize> = (1..series.len() - 1)
        .filter(|&i| series[i - 1] < series[i] && series[i] > series[i + 1])
        .collect();
    let pairs = peaks.len().saturating_sub(1);
    let (mean_peak_gap, mean_peak_value_gap) = if pairs == 0 {
        (None, None)
    } else {
        let gap: usize = peaks.windows(2).map(|w| w[1] - w[0]).sum();
        let value_gap: f64 = peaks
            .windows(2)
            .map(|w| (series[w[1]] - series[w[0]]).abs())
            .sum();
        (
            Some(gap as f64 / pairs as f64),
            Some(value_gap / pairs as f64),
        )
    };

    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let big = 0.1 * (hi - lo);
    let mut jump_sum = 0.0;
    let mut n_big_jumps = 0;
    for w in series.windows(2) {
        let j = (w[1] - w[0]).abs();
        jump_sum += j;
        if j > big {
            n_big_jumps += 1;
        }
    }

    let mut sorted = series.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    let (fence_lo, fence_hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let outliers = series
        .iter()
        .filter(|&&x| x < fence_lo || x > fence_hi)
        .count();

    Ok(QualityReport {
        n_peaks: peaks.len(),
        mean_peak_gap,
        mean_peak_value_gap,
        mean_jump: jump_sum / (series.len() - 1) as f64,
        n_big_jumps,
        pct_tukey_outliers: 100.0 * outliers as f64 / series.len() as f64,
    })
}

/// Quantile by linear interpolation between order statistics at
/// position `p * (n - 1)`.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Upper bound on the achievable compression ratio for a stream layout.
///
/// | layout                    | bound            |
/// |---------------------------|------------------|
/// | standard, several slots   | `8B`             |
/// | standard, one slot        | `8cB`            |
/// | residual/delta, several   | `8B / 9`         |
/// | residual/delta, one slot  | `8cB / (1 + 8c)` |
pub fn max_ratio(mode: Mode, block_size: usize, dict_count: u8, max_count: u8) -> f64 {
    let b = block_size as f64;
    let c = f64::from(max_count);
    match (mode.is_transformed(), dict_count == 1) {
        (false, false) => 8.0 * b,
        (false, true) => 8.0 * c * b,
        (true, false) => 8.0 * b / 9.0,
        (true, true) => 8.0 * c * b / (1.0 + 8.0 * c),
    }
}

pub fn compression_ratio(original_bytes: u64, encoded_bytes: u64) -> Result<f64> {
    if original_bytes == 0 || encoded_bytes == 0 {
        return Err(Error::InvalidParams(
            "compression ratio needs non-zero sizes".into(),
        ));
    }
    Ok(original_bytes as f64 / encoded_bytes as f64)
}

/// Single-sided amplitude spectrum without the DC bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// `|F_k|` for `k = 1 ..= n/2`.
    pub amplitudes: Vec<f64>,
    /// Transform length.
    pub n: usize,
}

/// Full complex DFT, `F_k = sum_n x_n exp(-2 pi i k n / N)`.
pub fn dft(series: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = series.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    if !buf.is_empty() {
        FftPlanner::new()
            .plan_fft_forward(buf.len())
            .process(&mut buf);
    }
    buf
}

/// Amplitude spectrum of the first `n` samples; `n` must be a power of two.
pub fn spectrum(series: &[f64], n: usize) -> Result<Spectrum> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParams(format!(
            "spectrum length {n} is not a power of two"
        )));
    }
    if n > series.len() {
        return Err(Error::SeriesTooShort {
            required: n,
            actual: series.len(),
        });
    }
    let f = dft(&series[..n]);
    Ok(Spectrum {
        amplitudes: f[1..=n / 2].iter().map(|c| c.norm()).collect(),
        n,
    })
}

/// Largest power of two not exceeding `len`.
pub fn pow2_prefix(len: usize) -> Option<usize> {
    (len > 0).then(|| 1usize << (usize::BITS - 1 - len.leading_zeros()))
}

const SPECTRAL_TOLERANCE: f64 = 1e-9;

/// Checks that repeating `block` `k` times puts `k * F~_{j}` at every bin
/// `j * k` and nothing anywhere else, within `1e-9 * sum|x|`.
pub fn duplication_spectrum_check(block: &[f64], k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("repetition count {k} < 2")));
    }
    if block.is_empty() {
        return Err(Error::EmptySample);
    }
    let repeated: Vec<f64> = block
        .iter()
        .copied()
        .cycle()
        .take(block.len() * k)
        .collect();
    let tol = SPECTRAL_TOLERANCE * repeated.iter().map(|x| x.abs()).sum::<f64>();
    let small = dft(block);
    let big = dft(&repeated);
    let kf = k as f64;
    Ok(big.iter().enumerate().all(|(bin, f)| {
        if bin % k == 0 {
            (f - small[bin / k] * kf).norm() <= tol
        } else {
            f.norm() < tol
        }
    }))
}

/// Largest `|F_j|` over bins `j` that are not multiples of `k`.
pub fn max_off_multiple_amplitude(series: &[f64], k: usize) -> f64 {
    dft(series)
        .iter()
        .enumerate()
        .filter(|(bin, _)| bin % k != 0)
        .map(|(_, f)| f.norm())
        .fold(0.0, f64::max)
}
