//! Synthetic series for exercising the codec and the transform analysis.
//!
//! Noise is drawn from [`rand_distr::StandardNormal`] (ziggurat) over a
//! [`ChaCha8Rng`] seeded with [`SeedableRng::seed_from_u64`], so every run
//! with the same seed reproduces the same samples on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::ks::ks_distance;
use crate::model::sort_samples;
use crate::transform::{delta_forward, residual_forward};

/// Linear trend plus white Gaussian noise: `x_i = x0 + m*i + w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendModel {
    pub x0: f64,
    /// Per-step increment.
    pub m: f64,
    pub sigma_w: f64,
    pub n: usize,
    pub seed: u64,
}

pub fn gen_trend(model: &TrendModel) -> Result<Vec<f64>> {
    if !(model.sigma_w >= 0.0 && model.sigma_w.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "noise deviation must be finite and >= 0, got {}",
            model.sigma_w
        )));
    }
    if model.n == 0 {
        return Err(Error::InvalidParams("trend length must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
    Ok((0..model.n)
        .map(|i| {
            let x = model.x0 + model.m * i as f64;
            if model.sigma_w == 0.0 {
                x
            } else {
                x + model.sigma_w * rng.sample::<f64, _>(StandardNormal)
            }
        })
        .collect())
}

/// How a similar block departs from its source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarBlockSpec {
    /// Every sample gets extra noise `N(0, sigma_w_prime^2)`.
    FirstKind { sigma_w_prime: f64 },
    /// The first `flat_fraction * B + 1` samples of each block are kept and
    /// the rest hold the last kept value.
    SecondKind { flat_fraction: f64 },
}

impl SimilarBlockSpec {
    fn validate(&self, block_size: usize) -> Result<()> {
        match *self {
            SimilarBlockSpec::FirstKind { sigma_w_prime } => {
                if !(sigma_w_prime >= 0.0 && sigma_w_prime.is_finite()) {
                    return Err(Error::InvalidParams(format!(
                        "extra noise deviation must be finite and >= 0, got {sigma_w_prime}"
                    )));
                }
            }
            SimilarBlockSpec::SecondKind { flat_fraction } => {
                if !(flat_fraction > 0.0 && flat_fraction < 1.0) {
                    return Err(Error::InvalidParams(format!(
                        "flat fraction must lie in (0, 1), got {flat_fraction}"
                    )));
                }
                let kept = flat_fraction * block_size as f64;
                if (kept - kept.round()).abs() > 1e-9 {
                    return Err(Error::InvalidParams(format!(
                        "flat fraction {flat_fraction} times block size {block_size} is not an integer"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Builds a series similar to `base`, block by block. `seed` drives the
/// first-kind noise and is ignored for the second kind.
pub fn gen_similar(
    base: &[f64],
    spec: SimilarBlockSpec,
    block_size: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if block_size < 2 {
        return Err(Error::InvalidParams(format!(
            "block size must be >= 2, got {block_size}"
        )));
    }
    spec.validate(block_size)?;
    match spec {
        SimilarBlockSpec::FirstKind { sigma_w_prime } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(base
                .iter()
                .map(|&x| {
                    if sigma_w_prime == 0.0 {
                        x
                    } else {
                        x + sigma_w_prime * rng.sample::<f64, _>(StandardNormal)
                    }
                })
                .collect())
        }
        SimilarBlockSpec::SecondKind { flat_fraction } => {
            let kept = (flat_fraction * block_size as f64).round() as usize;
            let mut out = base.to_vec();
            for chunk in out.chunks_mut(block_size) {
                if chunk.len() > kept + 1 {
                    let hold = chunk[kept];
                    chunk[kept + 1..].fill(hold);
                }
            }
            Ok(out)
        }
    }
}

/// KS distances between a block and its similar counterpart after each
/// transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaTrial {
    pub d_residual: f64,
    pub d_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaOutcome {
    pub trials: Vec<LemmaTrial>,
    pub mean_d_residual: f64,
    pub mean_d_delta: f64,
}

/// Per-trial seed; trials are independent of how many ran before.
fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Monte-Carlo comparison of residual and delta transforms.
///
/// Each trial draws one trend block (`x0 = 0`, increment `m`, noise
/// `sigma_w`), derives a similar block from that same realization, and
/// records the KS distance between the two transformed bodies.
pub fn lemma_experiment(
    spec: SimilarBlockSpec,
    m: f64,
    sigma_w: f64,
    block_size: usize,
    trials: usize,
    seed: u64,
) -> Result<LemmaOutcome> {
    if trials == 0 {
        return Err(Error::InvalidParams(
            "at least one trial is required".into(),
        ));
    }
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        let s = trial_seed(seed, t);
        let base = gen_trend(&TrendModel {
            x0: 0.0,
            m,
            sigma_w,
            n: block_size,
            seed: s,
        })?;
        let similar = gen_similar(&base, spec, block_size, s.rotate_left(32))?;
        let sorted = |mut v: Vec<f64>| {
            sort_samples(&mut v);
            v
        };
        let r0 = sorted(residual_forward(&base, None).body);
        let r1 = sorted(residual_forward(&similar, None).body);
        let d0 = sorted(delta_forward(&base, None).body);
        let d1 = sorted(delta_forward(&similar, None).body);
        out.push(LemmaTrial {
            d_residual: ks_distance(&r0, &r1)?,
            d_delta: ks_distance(&d0, &d1)?,
        });
    }
    let n = out.len() as f64;
    Ok(LemmaOutcome {
        mean_d_residual: out.iter().map(|t| t.d_residual).sum::<f64>() / n,
        mean_d_delta: out.iter().map(|t| t.d_delta).sum::<f64>() / n,
        trials: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(m: f64, sigma_w: f64, n: usize, seed: u64) -> TrendModel {
        TrendModel {
            x0: 7.0,
            m,
            sigma_w,
            n,
            seed,
        }
    }

    #[test]
    fn noiseless_trend_is_a_progression() {
        let x = gen_trend(&model(0.5, 0.0, 10, 1)).unwrap();
        for (i, v) in x.iter().enumerate() {
            assert_eq!(*v, 7.0 + 0.5 * i as f64);
        }
        assert!(delta_forward(&x, None).body.iter().all(|&d| d == 0.5));
    }

    #[test]
    fn stationary_noise_mean() {
        let n = 10_000;
        let x = gen_trend(&model(0.0, 1.0, n, 3)).unwrap();
        let mean = x.iter().sum::<f64>() / n as f64;
        assert!((mean - 7.0).abs() < 4.0 / (n as f64).sqrt(), "{mean}");
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let a = gen_trend(&model(1.0, 1.0, 64, 9)).unwrap();
        assert_eq!(a, gen_trend(&model(1.0, 1.0, 64, 9)).unwrap());
        assert_ne!(a, gen_trend(&model(1.0, 1.0, 64, 10)).unwrap());
    }

    #[test]
    fn trend_validation() {
        assert!(gen_trend(&model(1.0, -1.0, 4, 0)).is_err());
        assert!(gen_trend(&model(1.0, 1.0, 0, 0)).is_err());
    }

    #[test]
    fn similar_examples() {
        let base = [0.0, 1.0, 2.0, 3.0];
        let same = gen_similar(
            &base,
            SimilarBlockSpec::FirstKind { sigma_w_prime: 0.0 },
            4,
            5,
        )
        .unwrap();
        assert_eq!(same, base);

        let flat = gen_similar(
            &base,
            SimilarBlockSpec::SecondKind { flat_fraction: 0.5 },
            4,
            0,
        )
        .unwrap();
        assert_eq!(flat, vec![0.0, 1.0, 2.0, 2.0]);
        assert_eq!(delta_forward(&flat, None).body, vec![1.0, 1.0, 0.0]);

        assert!(gen_similar(
            &base,
            SimilarBlockSpec::SecondKind { flat_fraction: 0.3 },
            4,
            0
        )
        .is_err());
        assert!(gen_similar(
            &base,
            SimilarBlockSpec::SecondKind { flat_fraction: 1.0 },
            4,
            0
        )
        .is_err());
        assert!(gen_similar(
            &base,
            SimilarBlockSpec::FirstKind {
                sigma_w_prime: -1.0
            },
            4,
            0
        )
        .is_err());
    }

    #[test]
    fn second_kind_applies_per_block() {
        let base: Vec<f64> = (0..10).map(f64::from).collect();
        let out = gen_similar(
            &base,
            SimilarBlockSpec::SecondKind {
                flat_fraction: 0.25,
            },
            4,
            0,
        )
        .unwrap();
        assert_eq!(out, vec![0.0, 1.0, 1.0, 1.0, 4.0, 5.0, 5.0, 5.0, 8.0, 9.0]);
    }

    #[test]
    fn degenerate_first_kind_gives_zero_distance() {
        let out = lemma_experiment(
            SimilarBlockSpec::FirstKind { sigma_w_prime: 0.0 },
            1.0,
            0.1,
            64,
            50,
            0,
        )
        .unwrap();
        assert_eq!(out.mean_d_residual, 0.0);
        assert_eq!(out.mean_d_delta, 0.0);
        assert_eq!(out.trials.len(), 50);
    }

    #[test]
    fn experiment_is_reproducible() {
        let spec = SimilarBlockSpec::FirstKind { sigma_w_prime: 0.1 };
        let a = lemma_experiment(spec, 1.0, 0.1, 32, 20, 42).unwrap();
        assert_eq!(a, lemma_experiment(spec, 1.0, 0.1, 32, 20, 42).unwrap());
        assert!(lemma_experiment(spec, 1.0, 0.1, 32, 0, 42).is_err());
    }

    #[test]
    fn noisy_second_kind_favours_delta() {
        // With noise comparable to the step, part of the delta mass falls
        // near zero and the flat tail costs less than it does for residuals.
        let out = lemma_experiment(
            SimilarBlockSpec::SecondKind { flat_fraction: 0.5 },
            1.0,
            1.0,
            64,
            500,
            7,
        )
        .unwrap();
        assert!(out.mean_d_delta < out.mean_d_residual, "{out:?}");
    }
}
