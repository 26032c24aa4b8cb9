//! End-to-end tests of the `bingap` binary: output formats, exit codes,
//! and the weight-file interface.

use std::process::{Command, Output};

fn bingap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bingap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn allocate_sorted_greedy_inline() {
    let out = bingap(&["allocate", "--weights", "1,1,2,3,4,5", "--m", "2", "--algo", "sorted-greedy"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("loads: 8 8"), "{text}");
    assert!(text.contains("gap: 0"), "{text}");
    assert!(text.contains("ideal load: 8"), "{text}");
}

#[test]
fn allocate_greedy_inline() {
    let out = bingap(&["allocate", "--weights", "1,1,2,3,4,5", "--m", "2", "--algo", "greedy"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("loads: 7 9"), "{text}");
    assert!(text.contains("gap: 2"), "{text}");
}

#[test]
fn allocate_both_prints_two_blocks() {
    let out = bingap(&["allocate", "--weights", "1,1,2,3,4,5", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("algorithm: greedy"), "{text}");
    assert!(text.contains("algorithm: sorted-greedy"), "{text}");
}

#[test]
fn allocate_single_bin_is_allowed() {
    let out = bingap(&["allocate", "--weights", "1,2", "--m", "1", "--algo", "greedy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("gap: 0"));
}

#[test]
fn allocate_rejects_garbage_weights() {
    let out = bingap(&["allocate", "--weights", "abc", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("invalid weight"));
}

#[test]
fn allocate_rejects_negative_weights() {
    let out = bingap(&["allocate", "--weights", "1,-2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn weight_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.txt");
    std::fs::write(&path, "# six balls\n1\n1\n2\n3 # inline comment\n\n4\n5\n").unwrap();
    let out = bingap(&["allocate", "--weights-file", path.to_str().unwrap(), "--m", "2", "--algo", "greedy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).contains("gap: 2"));
}

#[test]
fn weight_file_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.txt");
    std::fs::write(&path, "1.0\nnope\n").unwrap();
    let out = bingap(&["allocate", "--weights-file", path.to_str().unwrap(), "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("line 2"), "{}", stderr_str(&out));
}

#[test]
fn sweep_n_emits_csv_rows_for_both_algorithms() {
    let out = bingap(&["sweep-n", "--n", "16,32", "--m", "2", "--reps", "20", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "algorithm,sorter,n,m,repetitions,master_seed,mean_gap,sigma_gap,min_gap,max_gap,mean_runtime_ns"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("greedy,comparison,16,2,20,"));
    assert!(lines[2].starts_with("sorted-greedy,comparison,16,2,20,"));
    assert!(lines[3].starts_with("greedy,comparison,32,2,20,"));
    // summary with gap ratios goes to stderr
    assert!(stderr_str(&out).contains("ratio"), "{}", stderr_str(&out));
}

#[test]
fn sweep_rejects_single_bin() {
    let out = bingap(&["sweep-n", "--n", "16", "--m", "1", "--reps", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("m >= 2"));
}

#[test]
fn sweep_m_rejects_more_bins_than_balls() {
    let out = bingap(&["sweep-m", "--m", "8", "--n", "4", "--reps", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_rejects_bad_distribution() {
    let out = bingap(&["sweep-n", "--n", "16", "--m", "2", "--reps", "5", "--dist", "normal:0:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_str(&out).contains("unsupported distribution"));
}

#[test]
fn unwritable_output_exits_3() {
    let out = bingap(&[
        "sweep-n", "--n", "16", "--m", "2", "--reps", "5", "--output", "/nonexistent-dir/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_str(&out).contains("cannot write"));
}

#[test]
fn json_format_mirrors_the_rows() {
    let out = bingap(&[
        "sweep-n", "--n", "16", "--m", "2", "--reps", "10", "--seed", "3", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["algorithm"], "greedy");
    assert_eq!(rows[0]["n"], 16);
    assert_eq!(rows[1]["algorithm"], "sorted-greedy");
    assert!(rows[0]["mean_gap"].as_f64().unwrap() >= 0.0);
}

#[test]
fn timing_flag_fills_the_runtime_column() {
    let args = ["sweep-n", "--n", "64", "--m", "2", "--reps", "10", "--seed", "5"];
    let without = stdout_str(&bingap(&args));
    let with_timing = stdout_str(&bingap(&[&args[..], &["--timing"]].concat()));
    assert!(without.lines().skip(1).all(|l| l.ends_with(",0")), "{without}");
    assert!(
        with_timing.lines().skip(1).any(|l| !l.ends_with(",0")),
        "{with_timing}"
    );
}

#[test]
fn bench_prints_overhead_fraction() {
    let out = bingap(&["bench", "--n", "512", "--m", "2", "--reps", "5", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.contains("overhead_fraction"), "{text}");
    assert!(text.contains("sort phase"), "{text}");
}

#[test]
fn bench_csv_has_one_row_per_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("timing.csv");
    let out = bingap(&[
        "bench", "--n", "256", "--m", "2", "--reps", "3", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.contains("greedy,comparison,256,2,3,"));
    assert!(text.contains("sorted-greedy,comparison,256,2,3,"));
}

#[test]
fn oracle_check_prints_one_line_per_trial() {
    let out = bingap(&["oracle-check", "--n", "10", "--m", "2", "--trials", "50", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().count(), 50, "{text}");
    assert!(text.lines().all(|l| l.ends_with("ok")), "{text}");
    assert!(text.lines().all(|l| l.contains("optimal")), "{text}");
}

#[test]
fn oracle_check_enforces_size_guard() {
    let out = bingap(&["oracle-check", "--n", "20", "--m", "2", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bingap(&["oracle-check", "--n", "8", "--m", "5", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_summary_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("oracle.csv");
    let out = bingap(&[
        "oracle-check", "--n", "6", "--m", "2", "--trials", "10", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("\noracle,"), "{text}");
}
