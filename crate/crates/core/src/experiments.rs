//! Seeded Monte-Carlo harness: weight sampling, repeated trials, gap
//! statistics, parameter sweeps, and a timing benchmark.
//!
//! Reproducibility contract: every repetition's weight sequence depends
//! only on `(master_seed, repetition index)`. Seeds are expanded with
//! SplitMix64 and fed to ChaCha8, both of which produce bit-identical
//! streams on every platform, so a fixed seed pins every statistic in
//! this module except wall-clock timings.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocators::{Algorithm, SorterChoice};
use crate::core::{BallSet, BinCount, Weight};
use crate::error::Error;

/// Repetition count used throughout the default experiment setups.
pub const DEFAULT_REPETITIONS: usize = 1000;

/// Master seed used by the CLI when none is given.
pub const DEFAULT_SEED: u64 = 42;

/// Ball counts for the default n-sweep: doubling from 32 to 8192, plus
/// one odd count to show nothing depends on powers of two.
pub const DEFAULT_SWEEP_N: &[usize] = &[32, 64, 128, 256, 512, 1024, 2048, 3027, 4096, 8192];

/// Bin counts for the default m-sweep.
pub const DEFAULT_SWEEP_M: &[usize] = &[2, 4, 8, 16, 32];

/// Weight distribution. Only the uniform family ships; the enum leaves
/// room for more.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistributionSpec {
    Uniform { lower: f64, upper: f64 },
}

impl DistributionSpec {
    pub fn uniform(lower: f64, upper: f64) -> Result<Self, Error> {
        if !lower.is_finite() || !upper.is_finite() || lower < 0.0 || upper <= lower {
            return Err(Error::InvalidConfig(format!(
                "uniform bounds [{lower}, {upper}) require 0 <= lower < upper"
            )));
        }
        Ok(DistributionSpec::Uniform { lower, upper })
    }
}

impl Default for DistributionSpec {
    fn default() -> Self {
        DistributionSpec::Uniform { lower: 0.0, upper: 10.0 }
    }
}

/// The `stream`-th output of a SplitMix64 sequence seeded with `master`.
/// Used to derive independent per-repetition and per-sweep-point seeds
/// without any sequential stepping.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let state = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(stream.wrapping_add(1)));
    let mut z = state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `n` weights from `dist`. The same `(n, dist, seed)` triple
/// yields a bit-identical ball set on every platform.
pub fn sample_uniform_weights(
    n: usize,
    dist: DistributionSpec,
    seed: u64,
) -> Result<BallSet, Error> {
    if n == 0 {
        return Err(Error::NoBalls);
    }
    let DistributionSpec::Uniform { lower, upper } = dist;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = (0..n)
        .map(|_| Weight::new(rng.gen_range(lower..upper)).expect("draw stays within bounds"))
        .collect();
    BallSet::new(weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: BinCount,
    pub repetitions: usize,
    pub master_seed: u64,
    pub distribution: DistributionSpec,
    pub algorithm: Algorithm,
    pub sorter: SorterChoice,
}

impl ExperimentConfig {
    pub fn new(
        n: usize,
        m: BinCount,
        repetitions: usize,
        master_seed: u64,
        distribution: DistributionSpec,
        algorithm: Algorithm,
        sorter: SorterChoice,
    ) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::NoBalls);
        }
        if m.get() < 2 {
            return Err(Error::InvalidConfig("experiments require m >= 2".into()));
        }
        if repetitions == 0 {
            return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
        }
        Ok(ExperimentConfig { n, m, repetitions, master_seed, distribution, algorithm, sorter })
    }
}

/// Aggregated gap statistics over all repetitions of one configuration.
#[derive(Debug, Clone)]
pub struct ExperimentStats {
    pub config: ExperimentConfig,
    pub mean_gap: f64,
    /// Sample standard deviation (divisor `repetitions - 1`).
    pub sigma_gap: f64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub per_rep_gaps: Vec<f64>,
    /// Mean wall-clock time of the allocation call alone; sampling and
    /// aggregation are excluded. Not reproducible across runs.
    pub mean_runtime: Duration,
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation with divisor `n - 1`; zero for n < 2.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Runs `repetitions` independent trials of the configured allocator,
/// each on a fresh seeded ball set, and aggregates the gaps in
/// repetition order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentStats, Error> {
    let mut gaps = Vec::with_capacity(cfg.repetitions);
    let mut total_runtime = Duration::ZERO;
    for rep in 0..cfg.repetitions as u64 {
        let balls = sample_uniform_weights(cfg.n, cfg.distribution, derive_seed(cfg.master_seed, rep))?;
        let start = Instant::now();
        let result = cfg.algorithm.run(&balls, cfg.m, cfg.sorter)?;
        total_runtime += start.elapsed();
        gaps.push(result.gap.value());
    }
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(ExperimentStats {
        config: cfg.clone(),
        mean_gap: mean(&gaps),
        sigma_gap: sample_std(&gaps),
        min_gap,
        max_gap,
        per_rep_gaps: gaps,
        mean_runtime: total_runtime / cfg.repetitions as u32,
    })
}

/// Knobs shared by every sweep point.
#[derive(Debug, Clone)]
pub struct SweepParams {
    pub repetitions: usize,
    pub master_seed: u64,
    pub distribution: DistributionSpec,
    pub sorter: SorterChoice,
    pub algorithms: Vec<Algorithm>,
}

impl Default for SweepParams {
    fn default() -> Self {
        SweepParams {
            repetitions: DEFAULT_REPETITIONS,
            master_seed: DEFAULT_SEED,
            distribution: DistributionSpec::default(),
            sorter: SorterChoice::Comparison,
            algorithms: vec![Algorithm::Greedy, Algorithm::SortedGreedy],
        }
    }
}

// Domain separators so n-sweep and m-sweep points never share streams.
const SWEEP_N_DOMAIN: u64 = 1;
const SWEEP_M_DOMAIN: u64 = 2;

/// Gap statistics as the number of balls grows, at a fixed bin count.
/// Each point gets a fresh derived master seed; all algorithms at one
/// point see identical weight sets, so their gaps are directly paired.
pub fn sweep_n(ns: &[usize], m: BinCount, params: &SweepParams) -> Result<Vec<ExperimentStats>, Error> {
    let mut rows = Vec::with_capacity(ns.len() * params.algorithms.len());
    for &n in ns {
        let point_seed = derive_seed(derive_seed(params.master_seed, SWEEP_N_DOMAIN), n as u64);
        for &algorithm in &params.algorithms {
            let cfg = ExperimentConfig::new(
                n,
                m,
                params.repetitions,
                point_seed,
                params.distribution,
                algorithm,
                params.sorter,
            )?;
            rows.push(run_experiment(&cfg)?);
        }
    }
    Ok(rows)
}

/// Gap statistics as the number of bins grows, at a fixed ball count.
pub fn sweep_m(ms: &[usize], n: usize, params: &SweepParams) -> Result<Vec<ExperimentStats>, Error> {
    let mut rows = Vec::with_capacity(ms.len() * params.algorithms.len());
    for &bins in ms {
        if bins > n {
            return Err(Error::InvalidConfig(format!(
                "m-sweep requires m <= n, got m={bins}, n={n}"
            )));
        }
        let m = BinCount::new(bins)?;
        let point_seed = derive_seed(derive_seed(params.master_seed, SWEEP_M_DOMAIN), bins as u64);
        for &algorithm in &params.algorithms {
            let cfg = ExperimentConfig::new(
                n,
                m,
                params.repetitions,
                point_seed,
                params.distribution,
                algorithm,
                params.sorter,
            )?;
            rows.push(run_experiment(&cfg)?);
        }
    }
    Ok(rows)
}

/// Wall-clock comparison of the two allocators on identical inputs.
#[derive(Debug, Clone)]
pub struct TimingReport {
    pub n: usize,
    pub m: usize,
    pub repetitions: usize,
    pub mean_total_greedy: Duration,
    pub mean_total_sorted: Duration,
    /// Time spent in the descending sort alone, measured separately on
    /// the same inputs.
    pub mean_sort_phase: Duration,
    pub median_total_greedy: Duration,
    pub median_total_sorted: Duration,
    /// `(sorted_total - greedy_total) / sorted_total`, from the means.
    pub overhead_fraction: f64,
    /// Per-repetition gaps observed during the timed runs.
    pub greedy_gaps: Vec<f64>,
    pub sorted_gaps: Vec<f64>,
}

fn median(durations: &mut [Duration]) -> Duration {
    durations.sort_unstable();
    durations[durations.len() / 2]
}

/// Measures both allocators over `repetitions` fresh instances after a
/// few discarded warm-up rounds. Sampling time is excluded; the run is
/// strictly sequential so the numbers are not polluted by scheduling.
pub fn timing_benchmark(
    n: usize,
    m: BinCount,
    repetitions: usize,
    sorter: SorterChoice,
    dist: DistributionSpec,
    seed: u64,
) -> Result<TimingReport, Error> {
    use std::hint::black_box;

    if repetitions == 0 {
        return Err(Error::InvalidConfig("repetitions must be >= 1".into()));
    }
    const WARMUP: usize = 3;

    let mut greedy_times = Vec::with_capacity(repetitions);
    let mut sorted_times = Vec::with_capacity(repetitions);
    let mut sort_times = Vec::with_capacity(repetitions);
    let mut greedy_gaps = Vec::with_capacity(repetitions);
    let mut sorted_gaps = Vec::with_capacity(repetitions);

    for rep in 0..(WARMUP + repetitions) as u64 {
        let balls = sample_uniform_weights(n, dist, derive_seed(seed, rep))?;

        let start = Instant::now();
        let greedy_result = black_box(Algorithm::Greedy.run(&balls, m, sorter)?);
        let greedy_elapsed = start.elapsed();

        let start = Instant::now();
        let sorted_result = black_box(Algorithm::SortedGreedy.run(&balls, m, sorter)?);
        let sorted_elapsed = start.elapsed();

        let start = Instant::now();
        match sorter {
            SorterChoice::Comparison => {
                black_box(crate::sorting::sort_descending_comparison(&balls));
            }
            SorterChoice::Distribution(cfg) => {
                black_box(crate::sorting::sort_descending_distribution(&balls, cfg));
            }
        }
        let sort_elapsed = start.elapsed();

        if rep >= WARMUP as u64 {
            greedy_times.push(greedy_elapsed);
            sorted_times.push(sorted_elapsed);
            sort_times.push(sort_elapsed);
            greedy_gaps.push(greedy_result.gap.value());
            sorted_gaps.push(sorted_result.gap.value());
        }
    }

    let mean_of = |times: &[Duration]| times.iter().sum::<Duration>() / times.len() as u32;
    let mean_total_greedy = mean_of(&greedy_times);
    let mean_total_sorted = mean_of(&sorted_times);
    let mean_sort_phase = mean_of(&sort_times);
    let overhead_fraction = (mean_total_sorted.as_secs_f64() - mean_total_greedy.as_secs_f64())
        / mean_total_sorted.as_secs_f64();

    Ok(TimingReport {
        n,
        m: m.get(),
        repetitions,
        mean_total_greedy,
        mean_total_sorted,
        mean_sort_phase,
        median_total_greedy: median(&mut greedy_times),
        median_total_sorted: median(&mut sorted_times),
        overhead_fraction,
        greedy_gaps,
        sorted_gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize, m: usize, reps: usize, seed: u64, algorithm: Algorithm) -> ExperimentConfig {
        ExperimentConfig::new(
            n,
            BinCount::new(m).unwrap(),
            reps,
            seed,
            DistributionSpec::default(),
            algorithm,
            SorterChoice::Comparison,
        )
        .unwrap()
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_uniform_weights(5, DistributionSpec::default(), 99).unwrap();
        let b = sample_uniform_weights(5, DistributionSpec::default(), 99).unwrap();
        assert_eq!(a, b);
        let c = sample_uniform_weights(5, DistributionSpec::default(), 100).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn sampling_respects_bounds() {
        let dist = DistributionSpec::uniform(2.0, 2.5).unwrap();
        let balls = sample_uniform_weights(3, dist, 1).unwrap();
        for w in balls.weights() {
            assert!(w.value() >= 2.0 && w.value() < 2.5, "{}", w.value());
        }
    }

    #[test]
    fn sample_mean_approaches_distribution_mean() {
        for seed in [1u64, 2, 3] {
            let balls = sample_uniform_weights(10_000, DistributionSpec::default(), seed).unwrap();
            let mean = balls.total_weight().value() / balls.len() as f64;
            assert!((4.8..=5.2).contains(&mean), "seed {seed}: mean {mean}");
        }
    }

    #[test]
    fn distribution_validation() {
        assert!(DistributionSpec::uniform(-1.0, 5.0).is_err());
        assert!(DistributionSpec::uniform(5.0, 5.0).is_err());
        assert!(DistributionSpec::uniform(5.0, 4.0).is_err());
        assert!(DistributionSpec::uniform(0.0, f64::INFINITY).is_err());
        assert!(DistributionSpec::uniform(0.0, 10.0).is_ok());
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(
            0,
            BinCount::new(2).unwrap(),
            10,
            1,
            DistributionSpec::default(),
            Algorithm::Greedy,
            SorterChoice::Comparison,
        )
        .is_err());
        assert!(ExperimentConfig::new(
            4,
            BinCount::new(1).unwrap(),
            10,
            1,
            DistributionSpec::default(),
            Algorithm::Greedy,
            SorterChoice::Comparison,
        )
        .is_err());
        assert!(ExperimentConfig::new(
            4,
            BinCount::new(2).unwrap(),
            0,
            1,
            DistributionSpec::default(),
            Algorithm::Greedy,
            SorterChoice::Comparison,
        )
        .is_err());
    }

    #[test]
    fn derive_seed_separates_streams() {
        let seeds: Vec<u64> = (0..100).map(|r| derive_seed(42, r)).collect();
        let mut unique = seeds.clone();
        unique.sort_unstable();
        unique.dedup();
        assert_eq!(unique.len(), seeds.len());
        assert_ne!(derive_seed(42, 0), derive_seed(43, 0));
    }

    #[test]
    fn single_ball_gap_is_the_weight_itself() {
        let config = cfg(1, 2, 100, 7, Algorithm::Greedy);
        let stats = run_experiment(&config).unwrap();
        // with one ball the gap equals that ball's weight, so the mean
        // gap must equal the mean of the sampled weights
        let mut expected = 0.0;
        for rep in 0..100u64 {
            let balls =
                sample_uniform_weights(1, config.distribution, derive_seed(7, rep)).unwrap();
            expected += balls.get(0).value();
        }
        expected /= 100.0;
        assert!((stats.mean_gap - expected).abs() < 1e-12, "{} vs {expected}", stats.mean_gap);
    }

    #[test]
    fn experiment_is_bit_reproducible() {
        let config = cfg(64, 2, 50, 123, Algorithm::SortedGreedy);
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.per_rep_gaps, b.per_rep_gaps);
        assert_eq!(a.mean_gap, b.mean_gap);
        assert_eq!(a.sigma_gap, b.sigma_gap);
        assert_eq!(a.min_gap, b.min_gap);
        assert_eq!(a.max_gap, b.max_gap);
    }

    #[test]
    fn stats_recompute_from_per_rep_gaps() {
        let stats = run_experiment(&cfg(32, 2, 200, 5, Algorithm::Greedy)).unwrap();
        let m = mean(&stats.per_rep_gaps);
        let s = sample_std(&stats.per_rep_gaps);
        assert!((m - stats.mean_gap).abs() <= 1e-12 * m.abs().max(1.0));
        assert!((s - stats.sigma_gap).abs() <= 1e-12 * s.abs().max(1.0));
        assert!(stats.min_gap <= stats.mean_gap && stats.mean_gap <= stats.max_gap);
        assert!(stats.sigma_gap >= 0.0);
    }

    #[test]
    fn fewer_balls_than_bins_gives_gap_equal_to_max_weight() {
        for seed in 0..20u64 {
            let balls = sample_uniform_weights(3, DistributionSpec::default(), seed).unwrap();
            let result = Algorithm::Greedy
                .run(&balls, BinCount::new(5).unwrap(), SorterChoice::Comparison)
                .unwrap();
            assert_eq!(result.gap, balls.max_weight());
        }
    }

    #[test]
    fn sorted_mean_beats_greedy_mean_on_small_sweep() {
        let params = SweepParams { repetitions: 200, ..SweepParams::default() };
        let rows = sweep_n(&[32, 64], BinCount::new(2).unwrap(), &params).unwrap();
        assert_eq!(rows.len(), 4);
        for pair in rows.chunks(2) {
            assert_eq!(pair[0].config.algorithm, Algorithm::Greedy);
            assert_eq!(pair[1].config.algorithm, Algorithm::SortedGreedy);
            assert_eq!(pair[0].config.n, pair[1].config.n);
            assert!(pair[1].mean_gap < pair[0].mean_gap);
        }
    }

    #[test]
    fn sweep_m_rejects_more_bins_than_balls() {
        let params = SweepParams { repetitions: 10, ..SweepParams::default() };
        assert!(sweep_m(&[4], 3, &params).is_err());
    }

    #[test]
    fn single_point_sweep_is_one_row_per_algorithm() {
        let params = SweepParams { repetitions: 20, ..SweepParams::default() };
        let rows = sweep_m(&[2], 16, &params).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn timing_report_with_one_rep_is_the_single_measurement() {
        let report = timing_benchmark(
            256,
            BinCount::new(2).unwrap(),
            1,
            SorterChoice::Comparison,
            DistributionSpec::default(),
            9,
        )
        .unwrap();
        assert_eq!(report.mean_total_greedy, report.median_total_greedy);
        assert_eq!(report.mean_total_sorted, report.median_total_sorted);
        let expected = (report.mean_total_sorted.as_secs_f64()
            - report.mean_total_greedy.as_secs_f64())
            / report.mean_total_sorted.as_secs_f64();
        assert_eq!(report.overhead_fraction, expected);
    }
}
