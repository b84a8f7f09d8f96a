//! Min/max pre-filter applied to each dictionary entry before the KS test.
//!
//! With `w = max(entry) - min(entry)`, a candidate passes when its minimum
//! lies in `[min - w*r, min + w*r]` and its maximum in `[max - w*r, max + w*r]`.
//! Short spikes that the KS test would shrug off push the candidate's
//! extrema outside these windows.

use crate::model::DictionaryEntry;

/// Slack used when the entry is constant and the window has zero width.
const DEGENERATE_SLACK: f64 = 1e-12;

pub fn minmax_pass(
    candidate_min: f64,
    candidate_max: f64,
    entry: &DictionaryEntry,
    r: f64,
) -> bool {
    debug_assert!(r >= 0.0);
    debug_assert!(candidate_min <= candidate_max);
    let (lo, hi) = (entry.min(), entry.max());
    let w = hi - lo;
    if w == 0.0 {
        let slack = DEGENERATE_SLACK * lo.abs().max(1.0);
        return (candidate_min - lo).abs() <= slack && (candidate_max - hi).abs() <= slack;
    }
    let tol = w * r;
    within(candidate_min, lo, tol) && within(candidate_max, hi, tol)
}

fn within(x: f64, center: f64, tol: f64) -> bool {
    center - tol <= x && x <= center + tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Mode;
    use proptest::prelude::*;

    fn entry(lo: f64, hi: f64) -> DictionaryEntry {
        DictionaryEntry::from_payload(Mode::Standard, vec![lo, (lo + hi) / 2.0, hi])
    }

    #[test]
    fn window_examples() {
        let e = entry(0.0, 10.0);
        assert!(minmax_pass(0.5, 9.5, &e, 0.1));
        assert!(!minmax_pass(0.5, 12.0, &e, 0.1));
        assert!(minmax_pass(-1.0, 11.0, &e, 0.1));
        assert!(!minmax_pass(-1.5, 10.0, &e, 0.1));
        // windows touch at r = 0.5: a point mass in the middle is admitted
        assert!(minmax_pass(5.0, 5.0, &e, 0.5));
        assert!(!minmax_pass(5.0, 5.0, &e, 0.49));
    }

    #[test]
    fn constant_entry_needs_near_equality() {
        let e = entry(3.0, 3.0);
        assert!(minmax_pass(3.0, 3.0, &e, 0.4));
        assert!(minmax_pass(3.0 + 1e-13, 3.0 + 1e-13, &e, 0.4));
        assert!(!minmax_pass(3.0, 3.001, &e, 10.0));
    }

    proptest! {
        #[test]
        fn passing_is_monotone_in_r(
            lo in -100.0f64..100.0, w in 0.0f64..50.0,
            cmin in -200.0f64..200.0, dc in 0.0f64..100.0,
            r1 in 0.0f64..2.0, dr in 0.0f64..2.0,
        ) {
            let e = entry(lo, lo + w);
            if minmax_pass(cmin, cmin + dc, &e, r1) {
                prop_assert!(minmax_pass(cmin, cmin + dc, &e, r1 + dr));
            }
        }

        #[test]
        fn identical_extrema_always_pass(lo in -1e6f64..1e6, w in 0.0f64..1e3, r in 0.0f64..5.0) {
            let e = entry(lo, lo + w);
            prop_assert!(minmax_pass(e.min(), e.max(), &e, r));
        }
    }
}
