//! Command-line front end: single allocations, parameter sweeps, timing
//! benchmarks, oracle checks, and the one-shot reproduction suite.
//!
//! Data (CSV or JSON) goes to `--output` or stdout; human-readable
//! summaries go to stderr so piped output stays machine-readable.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::allocators::{Algorithm, SorterChoice};
use crate::core::{load_tolerance, AllocationResult, BallSet, BinCount};
use crate::error::Error;
use crate::experiments::{
    self, sample_uniform_weights, sweep_m, sweep_n, timing_benchmark, DistributionSpec,
    ExperimentStats, SweepParams, TimingReport, DEFAULT_SEED, DEFAULT_SWEEP_M, DEFAULT_SWEEP_N,
};
use crate::oracle::{optimal_gap_bruteforce, verify_allocation, MAX_ORACLE_BALLS, MAX_ORACLE_BINS};
use crate::sorting::BucketConfig;

pub const EXIT_OK: i32 = 0;
/// User or input error.
pub const EXIT_USAGE: i32 = 2;
/// Output could not be written.
pub const EXIT_IO: i32 = 3;
/// A self-test gate (repro verdict or oracle check) failed.
pub const EXIT_GATE: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::usage(err.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bingap",
    version,
    about = "Offline weighted balls-into-bins: greedy vs sorted-greedy placement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Allocate a fixed list of weights and print loads, gap, and ideal load.
    Allocate(AllocateArgs),
    /// Gap statistics as the number of balls grows, at a fixed bin count.
    SweepN(SweepNArgs),
    /// Gap statistics as the number of bins grows, at a fixed ball count.
    SweepM(SweepMArgs),
    /// Wall-clock comparison of the two allocators, including the sort phase.
    Bench(BenchArgs),
    /// Compare both allocators against the exact brute-force optimum on
    /// random small instances.
    OracleCheck(OracleCheckArgs),
    /// Run the full reproduction suite: both n-sweeps, both m-sweeps, and
    /// the timing benchmark, with a pass/fail verdict summary.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Greedy,
    SortedGreedy,
    Both,
}

impl AlgoArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoArg::Greedy => vec![Algorithm::Greedy],
            AlgoArg::SortedGreedy => vec![Algorithm::SortedGreedy],
            AlgoArg::Both => vec![Algorithm::Greedy, Algorithm::SortedGreedy],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SorterArg {
    Comparison,
    Distribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

/// Flags shared by the statistics commands.
#[derive(Debug, Args)]
pub struct StatArgs {
    /// Repetitions per parameter point.
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    /// Master seed; every statistic is a pure function of it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Weight distribution, e.g. uniform:0:10.
    #[arg(long, default_value = "uniform:0:10")]
    pub dist: String,
    #[arg(long, value_enum, default_value_t = AlgoArg::Both)]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = SorterArg::Comparison)]
    pub sorter: SorterArg,
    /// Bucket-count ratio for the distribution sorter.
    #[arg(long, default_value_t = crate::sorting::DEFAULT_BUCKET_RATIO)]
    pub bucket_ratio: f64,
    /// Write rows here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Fill the mean_runtime_ns column with measured times. Off by
    /// default so identical seeds produce byte-identical output.
    #[arg(long)]
    pub timing: bool,
}

impl StatArgs {
    fn sorter_choice(&self) -> Result<SorterChoice, CliError> {
        make_sorter(self.sorter, self.bucket_ratio)
    }

    fn distribution(&self) -> Result<DistributionSpec, CliError> {
        parse_distribution(&self.dist).map_err(CliError::usage)
    }

    fn sweep_params(&self) -> Result<SweepParams, CliError> {
        Ok(SweepParams {
            repetitions: self.reps,
            master_seed: self.seed,
            distribution: self.distribution()?,
            sorter: self.sorter_choice()?,
            algorithms: self.algo.algorithms(),
        })
    }
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    /// Comma-separated weights, e.g. "1,1,2,3,4,5".
    #[arg(long, conflicts_with = "weights_file")]
    pub weights: Option<String>,
    /// File with one weight per line; '#' starts a comment.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = AlgoArg::Both)]
    pub algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = SorterArg::Comparison)]
    pub sorter: SorterArg,
    #[arg(long, default_value_t = crate::sorting::DEFAULT_BUCKET_RATIO)]
    pub bucket_ratio: f64,
}

#[derive(Debug, Args)]
pub struct SweepNArgs {
    /// Comma-separated ball counts (default: 32..8192 doubling, plus 3027).
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[command(flatten)]
    pub stat: StatArgs,
}

#[derive(Debug, Args)]
pub struct SweepMArgs {
    /// Comma-separated bin counts (default: 2,4,8,16,32).
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[command(flatten)]
    pub stat: StatArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 8192)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 100)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "uniform:0:10")]
    pub dist: String,
    #[arg(long, value_enum, default_value_t = SorterArg::Comparison)]
    pub sorter: SorterArg,
    #[arg(long, default_value_t = crate::sorting::DEFAULT_BUCKET_RATIO)]
    pub bucket_ratio: f64,
    /// Write per-algorithm timing rows here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "uniform:0:10")]
    pub dist: String,
    /// Write per-algorithm gap summary rows here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    /// Directory for the per-figure CSV files.
    #[arg(long, default_value = "repro-out")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Repetitions for the timing benchmark part.
    #[arg(long, default_value_t = 100)]
    pub bench_reps: usize,
}

/// Parses CLI arguments from the process environment and runs the
/// selected command, returning the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err.message);
            err.code
        }
    }
}

pub fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Allocate(args) => cmd_allocate(args),
        Command::SweepN(args) => cmd_sweep_n(args),
        Command::SweepM(args) => cmd_sweep_m(args),
        Command::Bench(args) => cmd_bench(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
        Command::Repro(args) => cmd_repro(args),
    }
}

// ---------------------------------------------------------------------------
// Output rows
// ---------------------------------------------------------------------------

pub const CSV_HEADER: &str =
    "algorithm,sorter,n,m,repetitions,master_seed,mean_gap,sigma_gap,min_gap,max_gap,mean_runtime_ns";

/// One output row per (algorithm, parameter point).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CsvRow {
    pub algorithm: String,
    pub sorter: String,
    pub n: u64,
    pub m: u64,
    pub repetitions: u64,
    pub master_seed: u64,
    pub mean_gap: f64,
    pub sigma_gap: f64,
    pub min_gap: f64,
    pub max_gap: f64,
    pub mean_runtime_ns: u64,
}

impl CsvRow {
    pub fn from_stats(stats: &ExperimentStats, include_timing: bool) -> CsvRow {
        CsvRow {
            algorithm: stats.config.algorithm.name().to_string(),
            sorter: stats.config.sorter.name().to_string(),
            n: stats.config.n as u64,
            m: stats.config.m.get() as u64,
            repetitions: stats.config.repetitions as u64,
            master_seed: stats.config.master_seed,
            mean_gap: stats.mean_gap,
            sigma_gap: stats.sigma_gap,
            min_gap: stats.min_gap,
            max_gap: stats.max_gap,
            mean_runtime_ns: if include_timing {
                stats.mean_runtime.as_nanos() as u64
            } else {
                0
            },
        }
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.sorter,
            self.n,
            self.m,
            self.repetitions,
            self.master_seed,
            fmt_sig9(self.mean_gap),
            fmt_sig9(self.sigma_gap),
            fmt_sig9(self.min_gap),
            fmt_sig9(self.max_gap),
            self.mean_runtime_ns,
        )
    }

    pub fn parse(line: &str) -> Result<CsvRow, String> {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 11 {
            return Err(format!("expected 11 fields, got {}", fields.len()));
        }
        fn num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T, String> {
            s.parse().map_err(|_| format!("bad {name}: '{s}'"))
        }
        Ok(CsvRow {
            algorithm: fields[0].to_string(),
            sorter: fields[1].to_string(),
            n: num(fields[2], "n")?,
            m: num(fields[3], "m")?,
            repetitions: num(fields[4], "repetitions")?,
            master_seed: num(fields[5], "master_seed")?,
            mean_gap: num(fields[6], "mean_gap")?,
            sigma_gap: num(fields[7], "sigma_gap")?,
            min_gap: num(fields[8], "min_gap")?,
            max_gap: num(fields[9], "max_gap")?,
            mean_runtime_ns: num(fields[10], "mean_runtime_ns")?,
        })
    }
}

/// Reals are serialized with 9 significant digits.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn render_rows(rows: &[CsvRow], format: FormatArg) -> String {
    match format {
        FormatArg::Csv => {
            let mut out = String::with_capacity(rows.len() * 96 + CSV_HEADER.len() + 1);
            out.push_str(CSV_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&row.to_csv_line());
                out.push('\n');
            }
            out
        }
        FormatArg::Json => {
            let mut out = serde_json::to_string_pretty(rows).expect("rows always serialize");
            out.push('\n');
            out
        }
    }
}

fn write_data(output: Option<&Path>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, content)
            .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| CliError::io(e.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

/// Parses the weight-file format: UTF-8 text, one non-negative decimal
/// per line, `#` comments, blank lines ignored. Errors carry the
/// 1-based line number.
pub fn parse_weight_file(text: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line
            .parse()
            .map_err(|_| format!("line {}: invalid weight '{line}'", idx + 1))?;
        if !value.is_finite() || value < 0.0 {
            return Err(format!(
                "line {}: weight {value} must be finite and non-negative",
                idx + 1
            ));
        }
        values.push(value);
    }
    Ok(values)
}

pub fn parse_inline_weights(list: &str) -> Result<Vec<f64>, String> {
    let mut values = Vec::new();
    for part in list.split(',') {
        let token = part.trim();
        let value: f64 = token
            .parse()
            .map_err(|_| format!("invalid weight '{token}'"))?;
        if !value.is_finite() || value < 0.0 {
            return Err(format!("weight {value} must be finite and non-negative"));
        }
        values.push(value);
    }
    Ok(values)
}

/// Accepts `uniform` or `uniform:LO:HI`.
pub fn parse_distribution(spec: &str) -> Result<DistributionSpec, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["uniform"] => Ok(DistributionSpec::default()),
        ["uniform", lo, hi] => {
            let lower: f64 = lo.parse().map_err(|_| format!("invalid lower bound '{lo}'"))?;
            let upper: f64 = hi.parse().map_err(|_| format!("invalid upper bound '{hi}'"))?;
            DistributionSpec::uniform(lower, upper).map_err(|e| e.to_string())
        }
        _ => Err(format!("unsupported distribution '{spec}' (expected uniform:LO:HI)")),
    }
}

fn make_sorter(kind: SorterArg, bucket_ratio: f64) -> Result<SorterChoice, CliError> {
    match kind {
        SorterArg::Comparison => Ok(SorterChoice::Comparison),
        SorterArg::Distribution => Ok(SorterChoice::Distribution(BucketConfig::new(bucket_ratio)?)),
    }
}

fn experiment_bins(m: usize) -> Result<BinCount, CliError> {
    if m < 2 {
        return Err(CliError::usage(format!("experiments require m >= 2, got {m}")));
    }
    Ok(BinCount::new(m)?)
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn cmd_allocate(args: AllocateArgs) -> Result<i32, CliError> {
    let values = match (&args.weights, &args.weights_file) {
        (Some(inline), None) => parse_inline_weights(inline).map_err(CliError::usage)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::usage(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_weight_file(&text)
                .map_err(|msg| CliError::usage(format!("{}: {msg}", path.display())))?
        }
        _ => return Err(CliError::usage("exactly one of --weights or --weights-file is required")),
    };
    let balls = BallSet::from_values(&values)?;
    let m = BinCount::new(args.m)?;
    let sorter = make_sorter(args.sorter, args.bucket_ratio)?;

    for algorithm in args.algo.algorithms() {
        let result = algorithm.run(&balls, m, sorter)?;
        print_allocation(algorithm, &result);
    }
    Ok(EXIT_OK)
}

fn print_allocation(algorithm: Algorithm, result: &AllocationResult) {
    println!("algorithm: {}", algorithm.name());
    let loads: Vec<String> = result.loads.iter().map(|w| w.to_string()).collect();
    println!("loads: {}", loads.join(" "));
    println!("gap: {}", result.gap);
    println!("ideal load: {}", result.ideal_load);
}

fn cmd_sweep_n(args: SweepNArgs) -> Result<i32, CliError> {
    let m = experiment_bins(args.m)?;
    let ns = args.n.unwrap_or_else(|| DEFAULT_SWEEP_N.to_vec());
    if ns.is_empty() || ns.contains(&0) {
        return Err(CliError::usage("every n must be >= 1"));
    }
    let params = args.stat.sweep_params()?;
    let stats = sweep_n(&ns, m, &params)?;
    emit_stats(&stats, &args.stat)?;
    print_sweep_summary(&stats);
    Ok(EXIT_OK)
}

fn cmd_sweep_m(args: SweepMArgs) -> Result<i32, CliError> {
    let ms = args.m.unwrap_or_else(|| DEFAULT_SWEEP_M.to_vec());
    for &m in &ms {
        experiment_bins(m)?;
    }
    let params = args.stat.sweep_params()?;
    let stats = sweep_m(&ms, args.n, &params)?;
    emit_stats(&stats, &args.stat)?;
    print_sweep_summary(&stats);
    Ok(EXIT_OK)
}

fn emit_stats(stats: &[ExperimentStats], args: &StatArgs) -> Result<(), CliError> {
    let rows: Vec<CsvRow> = stats.iter().map(|s| CsvRow::from_stats(s, args.timing)).collect();
    write_data(args.output.as_deref(), &render_rows(&rows, args.format))
}

/// Per-point summary on stderr: mean gap and sigma for each algorithm,
/// plus the greedy/sorted gap ratio when both were run.
fn print_sweep_summary(stats: &[ExperimentStats]) {
    let mut i = 0;
    while i < stats.len() {
        let (n, m) = (stats[i].config.n, stats[i].config.m.get());
        let mut greedy: Option<&ExperimentStats> = None;
        let mut sorted: Option<&ExperimentStats> = None;
        let mut j = i;
        while j < stats.len() && stats[j].config.n == n && stats[j].config.m.get() == m {
            match stats[j].config.algorithm {
                Algorithm::Greedy => greedy = Some(&stats[j]),
                Algorithm::SortedGreedy => sorted = Some(&stats[j]),
            }
            j += 1;
        }
        match (greedy, sorted) {
            (Some(g), Some(s)) => eprintln!(
                "n={n} m={m}: greedy mean {:.6} (sigma {:.6}), sorted-greedy mean {:.6} (sigma {:.6}), ratio {:.1}",
                g.mean_gap, g.sigma_gap, s.mean_gap, s.sigma_gap, g.mean_gap / s.mean_gap
            ),
            (Some(one), None) | (None, Some(one)) => eprintln!(
                "n={n} m={m}: {} mean {:.6} (sigma {:.6})",
                one.config.algorithm.name(),
                one.mean_gap,
                one.sigma_gap
            ),
            (None, None) => {}
        }
        i = j;
    }
}

fn cmd_bench(args: BenchArgs) -> Result<i32, CliError> {
    let m = experiment_bins(args.m)?;
    if args.n == 0 {
        return Err(CliError::usage("n must be >= 1"));
    }
    let sorter = make_sorter(args.sorter, args.bucket_ratio)?;
    let dist = parse_distribution(&args.dist).map_err(CliError::usage)?;
    let report = timing_benchmark(args.n, m, args.reps, sorter, dist, args.seed)?;
    print_timing_report(&report);

    if args.output.is_some() {
        let rows = timing_rows(&report, sorter, args.seed);
        write_data(args.output.as_deref(), &render_rows(&rows, args.format))?;
    }
    Ok(EXIT_OK)
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn print_timing_report(report: &TimingReport) {
    println!(
        "bench: n={} m={} reps={} (allocation only, sampling excluded)",
        report.n, report.m, report.repetitions
    );
    println!(
        "greedy        mean {:9.4} ms   median {:9.4} ms",
        ms(report.mean_total_greedy),
        ms(report.median_total_greedy)
    );
    println!(
        "sorted-greedy mean {:9.4} ms   median {:9.4} ms",
        ms(report.mean_total_sorted),
        ms(report.median_total_sorted)
    );
    println!("sort phase    mean {:9.4} ms", ms(report.mean_sort_phase));
    println!("overhead_fraction {:.4}", report.overhead_fraction);
}

fn timing_rows(report: &TimingReport, sorter: SorterChoice, seed: u64) -> Vec<CsvRow> {
    let gap_stats = |gaps: &[f64]| {
        (
            experiments::mean(gaps),
            experiments::sample_std(gaps),
            gaps.iter().copied().fold(f64::INFINITY, f64::min),
            gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        )
    };
    let (g_mean, g_sigma, g_min, g_max) = gap_stats(&report.greedy_gaps);
    let (s_mean, s_sigma, s_min, s_max) = gap_stats(&report.sorted_gaps);
    vec![
        CsvRow {
            algorithm: Algorithm::Greedy.name().to_string(),
            sorter: sorter.name().to_string(),
            n: report.n as u64,
            m: report.m as u64,
            repetitions: report.repetitions as u64,
            master_seed: seed,
            mean_gap: g_mean,
            sigma_gap: g_sigma,
            min_gap: g_min,
            max_gap: g_max,
            mean_runtime_ns: report.mean_total_greedy.as_nanos() as u64,
        },
        CsvRow {
            algorithm: Algorithm::SortedGreedy.name().to_string(),
            sorter: sorter.name().to_string(),
            n: report.n as u64,
            m: report.m as u64,
            repetitions: report.repetitions as u64,
            master_seed: seed,
            mean_gap: s_mean,
            sigma_gap: s_sigma,
            min_gap: s_min,
            max_gap: s_max,
            mean_runtime_ns: report.mean_total_sorted.as_nanos() as u64,
        },
    ]
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<i32, CliError> {
    if args.n == 0 || args.n > MAX_ORACLE_BALLS || args.m > MAX_ORACLE_BINS {
        return Err(CliError::usage(format!(
            "oracle-check requires 1 <= n <= {MAX_ORACLE_BALLS} and m <= {MAX_ORACLE_BINS}"
        )));
    }
    let m = experiment_bins(args.m)?;
    let dist = parse_distribution(&args.dist).map_err(CliError::usage)?;

    let mut violations = 0usize;
    let mut optimal_gaps = Vec::with_capacity(args.trials);
    let mut greedy_gaps = Vec::with_capacity(args.trials);
    let mut sorted_gaps = Vec::with_capacity(args.trials);

    for trial in 0..args.trials as u64 {
        let balls = sample_uniform_weights(args.n, dist, experiments::derive_seed(args.seed, trial))?;
        let optimal = optimal_gap_bruteforce(&balls, m)?;
        let greedy = Algorithm::Greedy.run(&balls, m, SorterChoice::Comparison)?;
        let sorted = Algorithm::SortedGreedy.run(&balls, m, SorterChoice::Comparison)?;

        let tol = load_tolerance(balls.total_weight());
        let opt = optimal.optimal_gap.value();
        let dominated = opt <= greedy.gap.value() + tol && opt <= sorted.gap.value() + tol;
        let verified = verify_allocation(&greedy, &balls) && verify_allocation(&sorted, &balls);
        let ok = dominated && verified;
        if !ok {
            violations += 1;
        }
        println!(
            "trial {trial}: optimal {:.9} sorted-greedy {:.9} greedy {:.9} {}",
            opt,
            sorted.gap.value(),
            greedy.gap.value(),
            if ok { "ok" } else { "VIOLATION" }
        );
        optimal_gaps.push(opt);
        greedy_gaps.push(greedy.gap.value());
        sorted_gaps.push(sorted.gap.value());
    }

    if args.output.is_some() {
        let summary_row = |name: &str, gaps: &[f64]| CsvRow {
            algorithm: name.to_string(),
            sorter: SorterChoice::Comparison.name().to_string(),
            n: args.n as u64,
            m: args.m as u64,
            repetitions: args.trials as u64,
            master_seed: args.seed,
            mean_gap: experiments::mean(gaps),
            sigma_gap: experiments::sample_std(gaps),
            min_gap: gaps.iter().copied().fold(f64::INFINITY, f64::min),
            max_gap: gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_runtime_ns: 0,
        };
        let rows = vec![
            summary_row("greedy", &greedy_gaps),
            summary_row("sorted-greedy", &sorted_gaps),
            summary_row("oracle", &optimal_gaps),
        ];
        write_data(args.output.as_deref(), &render_rows(&rows, args.format))?;
    }

    if violations > 0 {
        eprintln!("oracle-check: {violations} of {} trials violated dominance", args.trials);
        return Ok(EXIT_GATE);
    }
    eprintln!("oracle-check: {} trials, optimal <= heuristic gaps in every one", args.trials);
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// Reproduction suite
// ---------------------------------------------------------------------------

struct Verdict {
    pass: bool,
    line: String,
}

fn verdict(name: &str, pass: bool, detail: String) -> Verdict {
    Verdict { pass, line: format!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" }) }
}

fn mean_gap_at(stats: &[ExperimentStats], algorithm: Algorithm, n: usize, m: usize) -> f64 {
    stats
        .iter()
        .find(|s| s.config.algorithm == algorithm && s.config.n == n && s.config.m.get() == m)
        .map(|s| s.mean_gap)
        .expect("sweep covers the requested point")
}

fn cmd_repro(args: ReproArgs) -> Result<i32, CliError> {
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", args.out_dir.display())))?;

    let params = SweepParams {
        repetitions: args.reps,
        master_seed: args.seed,
        ..SweepParams::default()
    };
    let write_csv = |name: &str, stats: &[ExperimentStats]| -> Result<(), CliError> {
        let rows: Vec<CsvRow> = stats.iter().map(|s| CsvRow::from_stats(s, false)).collect();
        let path = args.out_dir.join(name);
        write_data(Some(&path), &render_rows(&rows, FormatArg::Csv))?;
        eprintln!("wrote {}", path.display());
        Ok(())
    };

    eprintln!("repro: n-sweep at m=2 ...");
    let fig_n_m2 = sweep_n(DEFAULT_SWEEP_N, BinCount::new(2)?, &params)?;
    write_csv("gap_vs_n_m2.csv", &fig_n_m2)?;

    eprintln!("repro: n-sweep at m=8 ...");
    let fig_n_m8 = sweep_n(DEFAULT_SWEEP_N, BinCount::new(8)?, &params)?;
    write_csv("gap_vs_n_m8.csv", &fig_n_m8)?;

    eprintln!("repro: m-sweep at n=1024 ...");
    let fig_m_n1024 = sweep_m(DEFAULT_SWEEP_M, 1024, &params)?;
    write_csv("gap_vs_m_n1024.csv", &fig_m_n1024)?;

    eprintln!("repro: m-sweep at n=3027 ...");
    let fig_m_n3027 = sweep_m(DEFAULT_SWEEP_M, 3027, &params)?;
    write_csv("gap_vs_m_n3027.csv", &fig_m_n3027)?;

    eprintln!("repro: timing benchmark at n=8192 m=2 ...");
    let timing = timing_benchmark(
        8192,
        BinCount::new(2)?,
        args.bench_reps,
        SorterChoice::Comparison,
        DistributionSpec::default(),
        args.seed,
    )?;
    {
        let rows = timing_rows(&timing, SorterChoice::Comparison, args.seed);
        let path = args.out_dir.join("timing.csv");
        write_data(Some(&path), &render_rows(&rows, FormatArg::Csv))?;
        eprintln!("wrote {}", path.display());
    }

    let verdicts = repro_verdicts(&fig_n_m2, &fig_n_m8, &fig_m_n1024, &fig_m_n3027, &timing);

    println!("reproduction summary (reps={}, seed={})", args.reps, args.seed);
    for n in [64, 256, 1024, 4096] {
        let row = fig_n_m2
            .iter()
            .find(|s| s.config.algorithm == Algorithm::Greedy && s.config.n == n)
            .expect("default sweep covers n");
        println!("  greedy sigma at n={n}, m=2: {:.4}", row.sigma_gap);
    }
    let mut failures = 0;
    for v in &verdicts {
        println!("{}", v.line);
        if !v.pass {
            failures += 1;
        }
    }
    println!("repro: {}/{} gates passed", verdicts.len() - failures, verdicts.len());

    if failures > 0 {
        Ok(EXIT_GATE)
    } else {
        Ok(EXIT_OK)
    }
}

fn repro_verdicts(
    fig_n_m2: &[ExperimentStats],
    fig_n_m8: &[ExperimentStats],
    fig_m_n1024: &[ExperimentStats],
    fig_m_n3027: &[ExperimentStats],
    timing: &TimingReport,
) -> Vec<Verdict> {
    let mut verdicts = Vec::new();
    let ratio_ns = [512usize, 1024, 2048, 4096];

    for (m, stats) in [(2usize, fig_n_m2), (8usize, fig_n_m8)] {
        let ratios: Vec<f64> = ratio_ns
            .iter()
            .map(|&n| {
                mean_gap_at(stats, Algorithm::Greedy, n, m)
                    / mean_gap_at(stats, Algorithm::SortedGreedy, n, m)
            })
            .collect();
        let min_ratio = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        verdicts.push(verdict(
            &format!("gap ratio >= 10 for n in 512..4096 at m={m}"),
            min_ratio >= 10.0,
            format!("min ratio {min_ratio:.1}"),
        ));
    }

    let big_ratio = mean_gap_at(fig_n_m2, Algorithm::Greedy, 8192, 2)
        / mean_gap_at(fig_n_m2, Algorithm::SortedGreedy, 8192, 2);
    verdicts.push(verdict(
        "gap ratio >= 50 at n=8192, m=2",
        big_ratio >= 50.0,
        format!("measured ratio {big_ratio:.1}"),
    ));

    let decay_ns = [64usize, 256, 1024, 4096];
    let sorted_means: Vec<f64> = decay_ns
        .iter()
        .map(|&n| mean_gap_at(fig_n_m2, Algorithm::SortedGreedy, n, 2))
        .collect();
    let strictly_decreasing = sorted_means.windows(2).all(|w| w[1] < w[0]);
    let tenfold = sorted_means[3] < sorted_means[0] / 10.0;
    let shown: Vec<String> = sorted_means.iter().map(|g| format!("{g:.3e}")).collect();
    verdicts.push(verdict(
        "sorted-greedy mean gap decays with n (strict, >=10x from n=64 to n=4096)",
        strictly_decreasing && tenfold,
        format!("means {}", shown.join(" ")),
    ));

    let greedy_means: Vec<f64> = decay_ns
        .iter()
        .map(|&n| mean_gap_at(fig_n_m2, Algorithm::Greedy, n, 2))
        .collect();
    let mut sorted_copy = greedy_means.clone();
    sorted_copy.sort_by(f64::total_cmp);
    let median = (sorted_copy[1] + sorted_copy[2]) / 2.0;
    let within = greedy_means.iter().all(|&g| (g - median).abs() <= 0.25 * median);
    verdicts.push(verdict(
        "greedy mean gap stays within 25% of its median across n",
        within,
        format!("means {greedy_means:.3?}, median {median:.3}"),
    ));

    for (n, stats) in [(1024usize, fig_m_n1024), (3027usize, fig_m_n3027)] {
        let all_dominated = DEFAULT_SWEEP_M.iter().all(|&m| {
            mean_gap_at(stats, Algorithm::Greedy, n, m)
                > mean_gap_at(stats, Algorithm::SortedGreedy, n, m)
        });
        let grows = mean_gap_at(stats, Algorithm::Greedy, n, 32)
            > mean_gap_at(stats, Algorithm::Greedy, n, 2);
        verdicts.push(verdict(
            &format!("m-sweep at n={n}: greedy above sorted-greedy everywhere, and rising in m"),
            all_dominated && grows,
            format!(
                "greedy m=2 {:.3}, m=32 {:.3}",
                mean_gap_at(stats, Algorithm::Greedy, n, 2),
                mean_gap_at(stats, Algorithm::Greedy, n, 32)
            ),
        ));
    }

    verdicts.push(verdict(
        "sorting overhead fraction < 0.10 at n=8192, m=2",
        timing.overhead_fraction < 0.10,
        format!("measured {:.4}", timing.overhead_fraction),
    ));

    verdicts
}
