//! Shared domain types and the two balance metrics: the gap between the
//! heaviest and lightest bin, and the ideal (divisible) per-bin load.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use crate::error::Error;

/// A non-negative, finite load value. The same type carries individual
/// ball weights and accumulated bin loads.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Weight(f64);

impl Weight {
    pub const ZERO: Weight = Weight(0.0);

    /// Rejects NaN, infinities, and negative values. `-0.0` is
    /// normalized to `+0.0` so equal weights always compare equal.
    pub fn new(value: f64) -> Result<Self, Error> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidWeight(value));
        }
        Ok(Weight(value + 0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    // Total order is sound: construction excludes NaN and normalizes -0.0.
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for Weight {
    type Output = Weight;

    fn add(self, rhs: Weight) -> Weight {
        Weight(self.0 + rhs.0)
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        self.0 += rhs.0;
    }
}

impl Sum for Weight {
    fn sum<I: Iterator<Item = Weight>>(iter: I) -> Weight {
        iter.fold(Weight::ZERO, Add::add)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An ordered, non-empty sequence of ball weights. Order matters: the
/// greedy allocator consumes balls in exactly this order.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSet {
    weights: Vec<Weight>,
}

impl BallSet {
    pub fn new(weights: Vec<Weight>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::NoBalls);
        }
        Ok(BallSet { weights })
    }

    /// Builds a ball set from raw values, validating each one.
    pub fn from_values(values: &[f64]) -> Result<Self, Error> {
        let weights = values
            .iter()
            .map(|&v| Weight::new(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn get(&self, index: usize) -> Weight {
        self.weights[index]
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().copied().sum()
    }

    pub fn max_weight(&self) -> Weight {
        self.weights.iter().copied().max().expect("non-empty by construction")
    }
}

/// Number of bins. `m >= 1` is accepted here; experiment configurations
/// additionally require `m >= 2` (a single bin always has gap zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct BinCount(usize);

impl BinCount {
    pub fn new(m: usize) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::NoBins);
        }
        Ok(BinCount(m))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for BinCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Complete outcome of one allocation run.
///
/// `assignments[b]` lists the ball indices placed into bin `b`, where
/// indices refer to the caller's original input order even when the
/// allocator reordered the balls internally.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationResult {
    pub loads: Vec<Weight>,
    pub assignments: Vec<Vec<usize>>,
    pub gap: Weight,
    pub ideal_load: Weight,
    pub total_weight: Weight,
}

/// Weight difference between the heaviest and the lightest bin.
pub fn gap(loads: &[Weight]) -> Result<Weight, Error> {
    let first = *loads.first().ok_or(Error::NoBins)?;
    let mut min = first;
    let mut max = first;
    for &load in &loads[1..] {
        if load < min {
            min = load;
        }
        if load > max {
            max = load;
        }
    }
    Ok(Weight(max.0 - min.0))
}

/// Per-bin load if balls were divisible: total weight over `m`.
pub fn ideal_load(balls: &BallSet, m: BinCount) -> Weight {
    Weight(balls.total_weight().value() / m.get() as f64)
}

/// Absolute tolerance for load-sum checks: 1e-9 scaled by max(1, total).
/// Accumulation order differs between allocators, so recomputed sums are
/// compared against this rather than bit-exactly.
pub fn load_tolerance(total_weight: Weight) -> f64 {
    1e-9 * total_weight.value().max(1.0)
}
