//! Residual and delta transforms for non-stationary blocks.
//!
//! Both keep the first sample as a base value and replace the remaining
//! `B - 1` samples: residuals subtract the base, deltas subtract the previous
//! sample. With a bounded value range (e.g. angles in `[0, 360)`), transformed
//! values are folded into `[-span/2, span/2]` and reconstructed samples are
//! wrapped back into `[min, max)`.

use crate::model::{Mode, ValueRange};

#[derive(Debug, Clone, PartialEq)]
pub struct TransformedBlock {
    pub base: f64,
    pub body: Vec<f64>,
}

impl TransformedBlock {
    /// `[base, body..]`, the layout written to the stream.
    pub fn to_payload(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.body.len() + 1);
        out.push(self.base);
        out.extend_from_slice(&self.body);
        out
    }
}

/// Past this many spans the value is pre-reduced with a floor division before
/// the exact add/subtract loop.
const MAX_STEPS: f64 = 64.0;

/// Folds a transformed value into `[-span/2, span/2]`.
pub fn fold_centered(mut v: f64, range: &ValueRange) -> f64 {
    let span = range.span();
    let half = span / 2.0;
    if (v.abs() / span) > MAX_STEPS {
        v -= (v / span).round() * span;
    }
    while v > half {
        v -= span;
    }
    while v < -half {
        v += span;
    }
    v
}

/// Wraps a reconstructed sample into `[min, max)`.
pub fn wrap_into(mut v: f64, range: &ValueRange) -> f64 {
    let span = range.span();
    if ((v - range.min).abs() / span) > MAX_STEPS {
        v -= ((v - range.min) / span).floor() * span;
    }
    while v >= range.max {
        v -= span;
    }
    while v < range.min {
        v += span;
    }
    // Adding the span to a value just below min can round up onto max.
    if v >= range.max {
        v = range.min;
    }
    v
}

pub fn residual_forward(block: &[f64], range: Option<&ValueRange>) -> TransformedBlock {
    assert!(
        block.len() >= 2,
        "residual transform needs at least two samples"
    );
    let base = block[0];
    let body = block[1..]
        .iter()
        .map(|&x| adjust(x - base, range))
        .collect();
    TransformedBlock { base, body }
}

pub fn delta_forward(block: &[f64], range: Option<&ValueRange>) -> TransformedBlock {
    assert!(
        block.len() >= 2,
        "delta transform needs at least two samples"
    );
    let body = block
        .windows(2)
        .map(|w| adjust(w[1] - w[0], range))
        .collect();
    TransformedBlock {
        base: block[0],
        body,
    }
}

/// Dispatches on `mode`; `None` for standard mode.
pub fn forward(mode: Mode, block: &[f64], range: Option<&ValueRange>) -> Option<TransformedBlock> {
    match mode {
        Mode::Standard => None,
        Mode::Residual => Some(residual_forward(block, range)),
        Mode::Delta => Some(delta_forward(block, range)),
    }
}

fn adjust(v: f64, range: Option<&ValueRange>) -> f64 {
    match range {
        Some(r) => fold_centered(v, r),
        None => v,
    }
}

/// Rebuilds a block from a base value and a transformed body.
///
/// # Panics
///
/// If `mode` is [`Mode::Standard`].
pub fn inverse(base: f64, body: &[f64], mode: Mode, range: Option<&ValueRange>) -> Vec<f64> {
    let mut out = Vec::with_capacity(body.len() + 1);
    match mode {
        Mode::Residual => {
            out.push(base);
            out.extend(body.iter().map(|&r| base + r));
        }
        Mode::Delta => {
            let mut acc = base;
            out.push(acc);
            for &d in body {
                acc += d;
                out.push(acc);
            }
        }
        Mode::Standard => panic!("standard mode has no inverse transform"),
    }
    if let Some(r) = range {
        for v in &mut out {
            *v = wrap_into(*v, r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const DEGREES: ValueRange = ValueRange {
        min: 0.0,
        max: 360.0,
    };

    #[test]
    fn residual_examples() {
        let t = residual_forward(&[100.0, 101.0, 103.0, 106.0], None);
        assert_eq!(t.base, 100.0);
        assert_eq!(t.body, vec![1.0, 3.0, 6.0]);

        let t = residual_forward(&[359.0, 1.0], Some(&DEGREES));
        assert_eq!(t.base, 359.0);
        assert_eq!(t.body, vec![2.0]);

        let t = residual_forward(&[5.0; 4], None);
        assert_eq!(t.body, vec![0.0; 3]);
    }

    #[test]
    fn delta_examples() {
        let t = delta_forward(&[100.0, 101.0, 103.0, 106.0], None);
        assert_eq!(t.base, 100.0);
        assert_eq!(t.body, vec![1.0, 2.0, 3.0]);

        let ramp: Vec<f64> = (0..5).map(|i| 7.0 + 0.5 * f64::from(i)).collect();
        let t = delta_forward(&ramp, None);
        assert_eq!(t.base, 7.0);
        assert_eq!(t.body, vec![0.5; 4]);

        let t = delta_forward(&[359.0, 1.0], Some(&DEGREES));
        assert_eq!(t.body, vec![2.0]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            inverse(359.0, &[2.0], Mode::Delta, Some(&DEGREES)),
            vec![359.0, 1.0]
        );
        assert_eq!(
            inverse(
                0.0,
                &[90.0, 180.0, 270.0, 450.0],
                Mode::Residual,
                Some(&DEGREES)
            ),
            vec![0.0, 90.0, 180.0, 270.0, 90.0]
        );
    }

    #[test]
    fn wrap_edges() {
        assert_eq!(wrap_into(360.0, &DEGREES), 0.0);
        assert_eq!(wrap_into(-1e-17, &DEGREES), 0.0);
        assert_eq!(wrap_into(-90.0, &DEGREES), 270.0);
        assert_eq!(wrap_into(3600.5, &DEGREES), 0.5);
        assert_eq!(wrap_into(1e9, &DEGREES), 1e9 % 360.0);
        assert_eq!(fold_centered(-358.0, &DEGREES), 2.0);
        assert_eq!(fold_centered(180.0, &DEGREES), 180.0);
        assert_eq!(fold_centered(181.0, &DEGREES), -179.0);
    }

    #[test]
    fn noiseless_progression() {
        let m = 0.25;
        let block: Vec<f64> = (0..16).map(|i| 3.0 + m * f64::from(i)).collect();
        assert!(delta_forward(&block, None).body.iter().all(|&d| d == m));
        let res = residual_forward(&block, None).body;
        for (k, r) in res.iter().enumerate() {
            assert_eq!(*r, (k + 1) as f64 * m);
        }
    }

    fn ulp(x: f64) -> f64 {
        let x = x.abs();
        f64::from_bits(x.to_bits() + 1) - x
    }

    proptest! {
        #[test]
        fn residual_inverse_within_one_ulp(block in prop::collection::vec(-1e6f64..1e6, 2..64)) {
            let t = residual_forward(&block, None);
            let back = inverse(t.base, &t.body, Mode::Residual, None);
            let scale = 2.0 * block.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            prop_assert_eq!(back[0], block[0]);
            for (a, b) in back.iter().zip(&block) {
                prop_assert!((a - b).abs() <= ulp(scale), "{} vs {}", a, b);
            }
        }

        #[test]
        fn delta_inverse_within_b_minus_one_ulps(block in prop::collection::vec(-1e6f64..1e6, 2..64)) {
            let t = delta_forward(&block, None);
            let back = inverse(t.base, &t.body, Mode::Delta, None);
            let scale = 2.0 * block.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let tol = (block.len() - 1) as f64 * ulp(scale);
            prop_assert_eq!(back[0], block[0]);
            for (a, b) in back.iter().zip(&block) {
                prop_assert!((a - b).abs() <= tol, "{} vs {}", a, b);
            }
        }

        #[test]
        fn integer_blocks_round_trip_exactly(block in prop::collection::vec(-100_000i32..100_000, 2..64)) {
            let block: Vec<f64> = block.into_iter().map(f64::from).collect();
            for mode in [Mode::Residual, Mode::Delta] {
                let t = forward(mode, &block, None).unwrap();
                prop_assert_eq!(&inverse(t.base, &t.body, mode, None), &block);
            }
        }

        #[test]
        fn ranged_round_trip(
            block in prop::collection::vec(-720.0f64..720.0, 2..40),
            delta in any::<bool>(),
        ) {
            let mode = if delta { Mode::Delta } else { Mode::Residual };
            let t = forward(mode, &block, Some(&DEGREES)).unwrap();
            let half = DEGREES.span() / 2.0;
            prop_assert!(t.body.iter().all(|v| (-half..=half).contains(v)));
            let back = inverse(t.base, &t.body, mode, Some(&DEGREES));
            for (a, b) in back.iter().zip(&block) {
                prop_assert!((0.0..360.0).contains(a));
                let want = wrap_into(*b, &DEGREES);
                // compare on the circle: 359.9999 and 0.0 are neighbours
                let gap = (a - want).abs();
                prop_assert!(gap.min(360.0 - gap) < 1e-9, "{} vs {}", a, want);
            }
        }
    }
}
