//! The two placement algorithms: greedy into the lightest bin, and
//! sorted-greedy (sort descending first, then greedy). Sorted-greedy is
//! the classic LPT heuristic and trades a sort pass for a far smaller
//! final gap.

use crate::core::{gap, ideal_load, AllocationResult, BallSet, BinCount, Weight};
use crate::error::Error;
use crate::sorting::{self, BucketConfig};

/// Which descending sort backs the sorted allocator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SorterChoice {
    #[default]
    Comparison,
    Distribution(BucketConfig),
}

impl SorterChoice {
    pub fn name(self) -> &'static str {
        match self {
            SorterChoice::Comparison => "comparison",
            SorterChoice::Distribution(_) => "distribution",
        }
    }
}

/// Allocation strategy selector used by experiments and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Greedy,
    SortedGreedy,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Greedy => "greedy",
            Algorithm::SortedGreedy => "sorted-greedy",
        }
    }

    pub fn run(
        self,
        balls: &BallSet,
        m: BinCount,
        sorter: SorterChoice,
    ) -> Result<AllocationResult, Error> {
        match self {
            Algorithm::Greedy => greedy_allocate(balls, m),
            Algorithm::SortedGreedy => sorted_greedy_allocate(balls, m, sorter),
        }
    }
}

/// Index of a bin with minimal current load; ties resolve to the lowest
/// index so that runs are reproducible.
pub fn find_lightest_bin(loads: &[Weight]) -> Result<usize, Error> {
    if loads.is_empty() {
        return Err(Error::NoBins);
    }
    let mut lightest = 0;
    for (i, &load) in loads.iter().enumerate().skip(1) {
        if load < loads[lightest] {
            lightest = i;
        }
    }
    Ok(lightest)
}

/// Places balls in input order, each into the currently lightest bin.
/// The first ball seeds bin 0 directly; every later ball goes through
/// [`find_lightest_bin`].
pub fn greedy_allocate(balls: &BallSet, m: BinCount) -> Result<AllocationResult, Error> {
    let bins = m.get();
    let mut loads = vec![Weight::ZERO; bins];
    let mut assignments: Vec<Vec<usize>> = vec![Vec::new(); bins];

    loads[0] = balls.get(0);
    assignments[0].push(0);

    for i in 1..balls.len() {
        let idx = find_lightest_bin(&loads)?;
        loads[idx] += balls.get(i);
        assignments[idx].push(i);
    }

    finish(balls, m, loads, assignments)
}

/// Sorts the balls into descending weight order with the chosen sorter,
/// runs the greedy placement on that order, and maps the resulting
/// assignments back to the caller's original ball indices.
pub fn sorted_greedy_allocate(
    balls: &BallSet,
    m: BinCount,
    sorter: SorterChoice,
) -> Result<AllocationResult, Error> {
    let sorted = match sorter {
        SorterChoice::Comparison => sorting::sort_descending_comparison(balls),
        SorterChoice::Distribution(cfg) => sorting::sort_descending_distribution(balls, cfg),
    };
    let inner = greedy_allocate(&sorted.balls, m)?;
    let assignments = inner
        .assignments
        .into_iter()
        .map(|bin| bin.into_iter().map(|pos| sorted.index_map[pos]).collect())
        .collect();
    Ok(AllocationResult { assignments, ..inner })
}

fn finish(
    balls: &BallSet,
    m: BinCount,
    loads: Vec<Weight>,
    assignments: Vec<Vec<usize>>,
) -> Result<AllocationResult, Error> {
    Ok(AllocationResult {
        gap: gap(&loads)?,
        ideal_load: ideal_load(balls, m),
        total_weight: balls.total_weight(),
        loads,
        assignments,
    })
}
