//! Bound-saturation and transform-direction experiments with pass/fail
//! verdicts.

use lemcodec::codec::encode_with_stats;
use lemcodec::quality::max_ratio;
use lemcodec::synth::{gen_trend, lemma_experiment, SimilarBlockSpec, TrendModel};
use lemcodec::{CodecParams, Encoder, Mode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn ratio_check(name: &'static str, ratio: f64, floor: f64, bound: f64) -> Check {
    Check {
        name,
        passed: ratio >= floor && ratio <= bound,
        detail: format!("ratio {ratio:.3}, required [{floor:.3}, {bound:.3}]"),
    }
}

fn random_block(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random::<f64>()).collect()
}

pub fn run(seed: u64, trials: usize) -> Result<Vec<Check>, lemcodec::Error> {
    let mut checks = Vec::new();
    let block = random_block(16, seed);

    let series: Vec<f64> = block.iter().copied().cycle().take(1_000_000).collect();
    let params = CodecParams::new(Mode::Standard, 16);
    let (bytes, stats) = encode_with_stats(&series, &params)?;
    let ratio = (8 * series.len()) as f64 / (bytes.len() as u64 - stats.header_bytes) as f64;
    checks.push(ratio_check(
        "standard B=16 D=255",
        ratio,
        0.9 * 128.0,
        128.0,
    ));

    let mut enc = Encoder::new(CodecParams::new(Mode::Standard, 16).with_dict_count(1))?;
    let blocks = 1_000_001u64;
    for _ in 0..blocks {
        enc.push_block(&block)?;
    }
    let (bytes, stats) = enc.finish(&[])?;
    let ratio = (8 * 16 * blocks) as f64 / (bytes.len() as u64 - stats.header_bytes) as f64;
    let bound = max_ratio(Mode::Standard, 16, 1, 255);
    checks.push(ratio_check(
        "standard B=16 D=1 c=255",
        ratio,
        0.9 * bound,
        bound,
    ));

    let ramp = gen_trend(&TrendModel {
        x0: 0.0,
        m: 1.0,
        sigma_w: 0.0,
        n: 64 * 100_000,
        seed,
    })?;
    let (bytes, stats) = encode_with_stats(&ramp, &CodecParams::new(Mode::Residual, 64))?;
    let ratio = (8 * ramp.len()) as f64 / (bytes.len() as u64 - stats.header_bytes) as f64;
    let bound = max_ratio(Mode::Residual, 64, 255, 255);
    checks.push(ratio_check("residual ramp B=64", ratio, 0.9 * bound, bound));

    let first = lemma_experiment(
        SimilarBlockSpec::FirstKind { sigma_w_prime: 0.1 },
        1.0,
        0.1,
        64,
        trials,
        seed,
    )?;
    checks.push(Check {
        name: "first kind favours residual",
        passed: first.mean_d_residual < first.mean_d_delta,
        detail: format!(
            "mean D residual {:.4}, delta {:.4}",
            first.mean_d_residual, first.mean_d_delta
        ),
    });
    let second = lemma_experiment(
        SimilarBlockSpec::SecondKind { flat_fraction: 0.5 },
        1.0,
        0.05,
        64,
        trials,
        seed,
    )?;
    checks.push(Check {
        name: "second kind favours delta",
        passed: second.mean_d_delta < second.mean_d_residual,
        detail: format!(
            "mean D residual {:.4}, delta {:.4}",
            second.mean_d_residual, second.mean_d_delta
        ),
    });
    Ok(checks)
}
