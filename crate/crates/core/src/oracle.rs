//! Exact minimum-gap search for small instances, plus allocation
//! verification. The oracle enumerates ball-to-bin assignments with
//! bin-relabeling symmetry pruned away, so heuristic results can be
//! compared against the true optimum.

use crate::core::{gap, load_tolerance, AllocationResult, BallSet, BinCount, Weight};
use crate::error::Error;

/// Size guard: enumeration is exponential, so the oracle refuses
/// anything beyond these limits instead of running for hours.
pub const MAX_ORACLE_BALLS: usize = 16;
pub const MAX_ORACLE_BINS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub optimal_gap: Weight,
    /// One optimal assignment, as per-bin lists of original ball indices.
    /// Deterministic: the lexicographically smallest canonical minimizer.
    pub witness: Vec<Vec<usize>>,
    /// Complete assignments evaluated during the search.
    pub instances_searched: u64,
}

struct Search<'a> {
    weights: &'a [Weight],
    bins: usize,
    remaining: Vec<f64>,
    ideal: f64,
    assignment: Vec<usize>,
    best_gap: f64,
    best_assignment: Vec<usize>,
    leaves: u64,
}

impl Search<'_> {
    fn gap_over_all_bins(&self, loads: &[f64; MAX_ORACLE_BINS], used: usize) -> f64 {
        let max = loads[..self.bins].iter().copied().fold(0.0f64, f64::max);
        let min = if used < self.bins {
            0.0
        } else {
            loads[..self.bins].iter().copied().fold(f64::INFINITY, f64::min)
        };
        max - min
    }

    fn run(&mut self, ball: usize, used: usize, loads: [f64; MAX_ORACLE_BINS]) {
        if ball == self.weights.len() {
            self.leaves += 1;
            let g = self.gap_over_all_bins(&loads, used);
            if g < self.best_gap {
                self.best_gap = g;
                self.best_assignment = self.assignment.clone();
            }
            return;
        }

        // The current max only grows, and the final min cannot exceed
        // either the ideal load or the current min plus all remaining
        // weight. Subtrees that cannot beat the best gap are skipped.
        let cur_max = loads[..self.bins].iter().copied().fold(0.0f64, f64::max);
        let cur_min = if used < self.bins {
            0.0
        } else {
            loads[..self.bins].iter().copied().fold(f64::INFINITY, f64::min)
        };
        let min_ceiling = (cur_min + self.remaining[ball]).min(self.ideal);
        if cur_max - min_ceiling >= self.best_gap {
            return;
        }

        // Canonical bin order: a ball may enter any open bin or the
        // single next unopened one, which prunes bin relabelings.
        let choices = (used + 1).min(self.bins);
        for bin in 0..choices {
            let mut next = loads;
            next[bin] += self.weights[ball].value();
            self.assignment[ball] = bin;
            let next_used = if bin == used { used + 1 } else { used };
            self.run(ball + 1, next_used, next);
        }
    }
}

/// Minimum achievable gap over every assignment of balls to bins.
pub fn optimal_gap_bruteforce(balls: &BallSet, m: BinCount) -> Result<OracleResult, Error> {
    let n = balls.len();
    let bins = m.get();
    if n > MAX_ORACLE_BALLS || bins > MAX_ORACLE_BINS {
        return Err(Error::InstanceTooLarge { n, m: bins });
    }

    let mut remaining = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        remaining[i] = remaining[i + 1] + balls.get(i).value();
    }
    let ideal = remaining[0] / bins as f64;

    let mut search = Search {
        weights: balls.weights(),
        bins,
        remaining,
        ideal,
        assignment: vec![0; n],
        best_gap: f64::INFINITY,
        best_assignment: Vec::new(),
        leaves: 0,
    };
    search.run(0, 0, [0.0; MAX_ORACLE_BINS]);

    let mut witness = vec![Vec::new(); bins];
    for (ball, &bin) in search.best_assignment.iter().enumerate() {
        witness[bin].push(ball);
    }

    Ok(OracleResult {
        optimal_gap: Weight::new(search.best_gap).expect("gap of finite loads is finite"),
        witness,
        instances_searched: search.leaves,
    })
}

/// Detailed consistency check of an allocation against its input.
/// Returns the first violation found.
pub fn check_allocation(result: &AllocationResult, balls: &BallSet) -> Result<(), String> {
    let n = balls.len();
    let bins = result.loads.len();
    if result.assignments.len() != bins {
        return Err(format!(
            "{} assignment lists for {} loads",
            result.assignments.len(),
            bins
        ));
    }

    let mut seen = vec![false; n];
    for (bin, assigned) in result.assignments.iter().enumerate() {
        for &i in assigned {
            if i >= n {
                return Err(format!("bin {bin} references ball {i}, but n = {n}"));
            }
            if seen[i] {
                return Err(format!("ball {i} assigned more than once"));
            }
            seen[i] = true;
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(format!("ball {missing} never assigned"));
    }

    let tol = load_tolerance(balls.total_weight());
    for (bin, assigned) in result.assignments.iter().enumerate() {
        let recomputed: f64 = assigned.iter().map(|&i| balls.get(i).value()).sum();
        let recorded = result.loads[bin].value();
        if (recomputed - recorded).abs() > tol {
            return Err(format!(
                "bin {bin} load {recorded} does not match recomputed {recomputed}"
            ));
        }
    }

    let recomputed_gap = gap(&result.loads).map_err(|e| e.to_string())?.value();
    if (recomputed_gap - result.gap.value()).abs() > tol {
        return Err(format!(
            "recorded gap {} does not match recomputed {recomputed_gap}",
            result.gap.value()
        ));
    }

    let load_sum: f64 = result.loads.iter().map(|w| w.value()).sum();
    if (load_sum - result.total_weight.value()).abs() > tol {
        return Err(format!(
            "loads sum to {load_sum}, expected total {}",
            result.total_weight.value()
        ));
    }
    let expected_ideal = result.total_weight.value() / bins as f64;
    if (result.ideal_load.value() - expected_ideal).abs() > tol {
        return Err(format!(
            "ideal load {} does not match {expected_ideal}",
            result.ideal_load.value()
        ));
    }

    Ok(())
}

/// True iff the allocation passes every check in [`check_allocation`].
pub fn verify_allocation(result: &AllocationResult, balls: &BallSet) -> bool {
    check_allocation(result, balls).is_ok()
}
