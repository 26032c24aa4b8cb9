//! Descending sorts with index tracking.
//!
//! Two strategies produce the same canonical order (non-increasing
//! weight, ties broken by ascending original index): a comparison-based
//! sort for arbitrary inputs, and a distribution-based sort that first
//! classifies weights into buckets by value range, which runs in linear
//! time on average for near-uniform data.

use crate::core::{BallSet, Weight};
use crate::error::Error;

/// Recommended bucket-count ratio for the distribution sorter.
pub const DEFAULT_BUCKET_RATIO: f64 = 0.42;

/// Bucket-count parameter for the distribution sorter. The number of
/// buckets for an input of `n` balls is `max(1, floor(ratio * n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BucketConfig {
    ratio: f64,
}

impl BucketConfig {
    pub fn new(ratio: f64) -> Result<Self, Error> {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(Error::InvalidBucketRatio(ratio));
        }
        Ok(BucketConfig { ratio })
    }

    pub fn ratio(self) -> f64 {
        self.ratio
    }

    pub fn bucket_count(self, n: usize) -> usize {
        ((self.ratio * n as f64).floor() as usize).max(1)
    }
}

impl Default for BucketConfig {
    fn default() -> Self {
        BucketConfig { ratio: DEFAULT_BUCKET_RATIO }
    }
}

/// A descending-sorted ball sequence plus the permutation that produced
/// it: `index_map[sorted_pos]` is the ball's index in the original input.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedBalls {
    pub balls: BallSet,
    pub index_map: Vec<usize>,
}

fn canonical_order(a: &(Weight, usize), b: &(Weight, usize)) -> std::cmp::Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(&b.1))
}

fn assemble(keyed: Vec<(Weight, usize)>) -> SortedBalls {
    let index_map = keyed.iter().map(|&(_, i)| i).collect();
    let weights = keyed.into_iter().map(|(w, _)| w).collect();
    SortedBalls {
        balls: BallSet::new(weights).expect("input was non-empty"),
        index_map,
    }
}

/// Comparison-based descending sort.
pub fn sort_descending_comparison(balls: &BallSet) -> SortedBalls {
    let mut keyed: Vec<(Weight, usize)> =
        balls.weights().iter().copied().zip(0..).collect();
    // The comparator is a total order (index breaks weight ties), so an
    // unstable sort yields the canonical stable-descending result.
    keyed.sort_unstable_by(canonical_order);
    assemble(keyed)
}

/// Distribution-based descending sort (flashsort-style).
///
/// A ball of weight `w` goes to bucket `floor((k-1) * (w - w_min) /
/// (w_max - w_min))`, or bucket 0 when all weights are equal. Buckets are
/// sorted individually and concatenated from the top bucket down.
pub fn sort_descending_distribution(balls: &BallSet, cfg: BucketConfig) -> SortedBalls {
    let n = balls.len();
    let k = cfg.bucket_count(n);
    let w_min = balls.weights().iter().copied().min().expect("non-empty").value();
    let w_max = balls.max_weight().value();
    let span = w_max - w_min;

    let mut buckets: Vec<Vec<(Weight, usize)>> = vec![Vec::new(); k];
    for (i, &w) in balls.weights().iter().enumerate() {
        let bucket = if span > 0.0 {
            ((((k - 1) as f64) * (w.value() - w_min) / span).floor() as usize).min(k - 1)
        } else {
            0
        };
        buckets[bucket].push((w, i));
    }

    let mut keyed = Vec::with_capacity(n);
    for bucket in buckets.iter_mut().rev() {
        bucket.sort_unstable_by(canonical_order);
        keyed.append(bucket);
    }
    assemble(keyed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn balls(vs: &[f64]) -> BallSet {
        BallSet::from_values(vs).unwrap()
    }

    fn values(sorted: &SortedBalls) -> Vec<f64> {
        sorted.balls.weights().iter().map(|w| w.value()).collect()
    }

    #[test]
    fn comparison_sort_with_ties() {
        let sorted = sort_descending_comparison(&balls(&[1.0, 1.0, 2.0, 3.0, 4.0, 5.0]));
        assert_eq!(values(&sorted), vec![5.0, 4.0, 3.0, 2.0, 1.0, 1.0]);
        assert_eq!(sorted.index_map, vec![5, 4, 3, 2, 0, 1]);
    }

    #[test]
    fn comparison_sort_singleton() {
        let sorted = sort_descending_comparison(&balls(&[7.0]));
        assert_eq!(values(&sorted), vec![7.0]);
        assert_eq!(sorted.index_map, vec![0]);
    }

    #[test]
    fn comparison_sort_all_equal_keeps_input_order() {
        let sorted = sort_descending_comparison(&balls(&[2.0, 2.0, 2.0]));
        assert_eq!(values(&sorted), vec![2.0, 2.0, 2.0]);
        assert_eq!(sorted.index_map, vec![0, 1, 2]);
    }

    #[test]
    fn distribution_sort_matches_fixture() {
        let cfg = BucketConfig::default();
        assert_eq!(cfg.bucket_count(6), 2);
        let sorted = sort_descending_distribution(&balls(&[1.0, 1.0, 2.0, 3.0, 4.0, 5.0]), cfg);
        assert_eq!(values(&sorted), vec![5.0, 4.0, 3.0, 2.0, 1.0, 1.0]);
        assert_eq!(sorted.index_map, vec![5, 4, 3, 2, 0, 1]);
    }

    #[test]
    fn distribution_sort_degenerate_range() {
        let sorted = sort_descending_distribution(&balls(&[9.0, 9.0, 9.0]), BucketConfig::default());
        assert_eq!(values(&sorted), vec![9.0, 9.0, 9.0]);
        assert_eq!(sorted.index_map, vec![0, 1, 2]);
    }

    #[test]
    fn bucket_ratio_validation() {
        assert!(BucketConfig::new(0.0).is_err());
        assert!(BucketConfig::new(-0.1).is_err());
        assert!(BucketConfig::new(1.1).is_err());
        assert!(BucketConfig::new(f64::NAN).is_err());
        assert!(BucketConfig::new(1.0).is_ok());
    }

    #[test]
    fn bucket_count_formula() {
        let cfg = BucketConfig::default();
        assert_eq!(cfg.bucket_count(1), 1);
        assert_eq!(cfg.bucket_count(2), 1);
        assert_eq!(cfg.bucket_count(3), 1);
        assert_eq!(cfg.bucket_count(10), 4);
        assert_eq!(cfg.bucket_count(100), 42);
        // k stays below n for n >= 3 at the default ratio
        for n in 3..200 {
            assert!(cfg.bucket_count(n) < n, "n={n}");
        }
    }

    fn weight_vec() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(
            prop_oneof![0.0f64..10.0, Just(0.0), Just(5.0), Just(10.0)],
            1..300,
        )
    }

    proptest! {
        #[test]
        fn sorters_agree_exactly(vs in weight_vec(), ratio in 0.05f64..1.0) {
            let input = balls(&vs);
            let a = sort_descending_comparison(&input);
            let b = sort_descending_distribution(&input, BucketConfig::new(ratio).unwrap());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn sorted_output_is_non_increasing_permutation(vs in weight_vec()) {
            let input = balls(&vs);
            let sorted = sort_descending_distribution(&input, BucketConfig::default());

            for pair in sorted.balls.weights().windows(2) {
                prop_assert!(pair[0] >= pair[1]);
            }

            let mut seen = vec![false; vs.len()];
            for (pos, &orig) in sorted.index_map.iter().enumerate() {
                prop_assert!(!seen[orig], "index {orig} mapped twice");
                seen[orig] = true;
                prop_assert_eq!(sorted.balls.get(pos), input.get(orig));
            }
        }
    }
}
