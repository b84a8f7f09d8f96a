#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `len` distinct values spread over `[lo, lo + 1)`.
pub fn template(len: usize, lo: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| lo + rng.random::<f64>()).collect()
}

/// Concatenates random permutations of the templates picked by `groups`.
pub fn grouped_series(templates: &[Vec<f64>], groups: &[usize], rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = Vec::new();
    for &g in groups {
        let mut b = templates[g].clone();
        b.shuffle(rng);
        out.extend(b);
    }
    out
}

pub fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_unstable_by(f64::total_cmp);
    v
}

pub fn ulp(x: f64) -> f64 {
    let x = x.abs();
    f64::from_bits(x.to_bits() + 1) - x
}

pub fn bytes_to_f64(bytes: &[u8]) -> Vec<f64> {
    bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect()
}
