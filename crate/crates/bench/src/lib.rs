//! Deterministic inputs shared by the criterion benches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `blocks` shuffled copies of `groups` distinct templates, each of
/// `block_size` samples on its own level.
pub fn grouped_series(groups: usize, block_size: usize, blocks: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let templates: Vec<Vec<f64>> = (0..groups)
        .map(|g| {
            (0..block_size)
                .map(|_| 4.0 * g as f64 + rng.random::<f64>())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(blocks * block_size);
    for j in 0..blocks {
        let mut b = templates[(j * 7 + j / 3) % groups].clone();
        b.shuffle(&mut rng);
        out.extend(b);
    }
    out
}

/// Sorted uniform sample.
pub fn sorted_uniform(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    v.sort_unstable_by(f64::total_cmp);
    v
}
