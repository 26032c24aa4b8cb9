//! Offline weighted balls-into-bins allocation.
//!
//! Two placement heuristics are implemented side by side: plain greedy
//! (each ball into the currently lightest bin, in input order) and
//! sorted-greedy (descending sort first, then the same placement). An
//! exact brute-force oracle covers small instances, and a seeded
//! Monte-Carlo harness measures gap statistics and timing behavior at
//! scale. The `bingap` binary wraps all of it behind a CLI.

pub mod allocators;
pub mod cli;
pub mod core;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod sorting;

pub use crate::allocators::{
    find_lightest_bin, greedy_allocate, sorted_greedy_allocate, Algorithm, SorterChoice,
};
pub use crate::core::{gap, ideal_load, AllocationResult, BallSet, BinCount, Weight};
pub use crate::error::Error;
