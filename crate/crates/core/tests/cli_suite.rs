//! End-to-end tests of the command-line binary: argument handling, table
//! formats, exit codes, and numerical plumbing of every subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

use spence_abel::{rogers_reference, ZETA2};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_spence-abel"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary should run")
}

fn stdout_of(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

/// Parse CSV emitted by the binary: header names plus rows of optional
/// floats (empty cells are None).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let headers = lines
        .next()
        .expect("csv header")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| {
                    if c.is_empty() {
                        None
                    } else {
                        Some(c.parse::<f64>().expect("numeric cell"))
                    }
                })
                .collect()
        })
        .collect();
    (headers, rows)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("spence-abel-cli-tests");
    std::fs::create_dir_all(&dir).expect("scratch dir");
    dir.join(format!("{}-{}", std::process::id(), name))
}

#[test]
fn eval_rogers_both_mode_passes_the_default_gate() {
    let out = run(&["eval-rogers", "--xs", "0.25,0.5,0.75"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (headers, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(headers, ["x", "rogers_new", "rogers_ref", "abs_diff"]);
    assert_eq!(rows.len(), 3);
    for row in &rows {
        let diff = row[3].expect("diff column");
        assert!(diff <= 1e-4, "diff {diff} above the gate");
    }
    assert!((rows[1][0].unwrap() - 0.5).abs() < 1e-15);
    assert!(stderr_of(&out).contains("max |new - reference|"));
}

#[test]
fn eval_rogers_cells_use_seventeen_significant_digits() {
    let out = run(&["eval-rogers", "--xs", "0.5", "--mode", "reference"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let row = text.lines().nth(1).expect("data row");
    let cell = row.split(',').nth(2).expect("reference cell");
    let mantissa = cell.split('e').next().expect("mantissa");
    assert_eq!(
        mantissa.len(),
        18,
        "want d.16-digits mantissa, got {cell:?}"
    );
    assert_eq!(&mantissa[1..2], ".");
}

#[test]
fn eval_rogers_reference_mode_leaves_formula_columns_empty() {
    let out = run(&["eval-rogers", "--xs", "0.3,0.6", "--mode", "reference"]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = parse_csv(&stdout_of(&out));
    for (row, x) in rows.iter().zip([0.3, 0.6]) {
        assert!(row[1].is_none(), "formula column should be empty");
        assert!(row[3].is_none(), "diff column should be empty");
        let reference = row[2].expect("reference value");
        assert!((reference - rogers_reference(x).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn eval_rogers_emits_json_when_asked() {
    let out = run(&["eval-rogers", "--xs", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("json table");
    let arr = v.as_array().expect("array of rows");
    assert_eq!(arr.len(), 1);
    let row = arr[0].as_object().expect("row object");
    assert!((row["x"].as_f64().unwrap() - 0.5).abs() < 1e-15);
    assert!(row["abs_diff"].as_f64().unwrap() <= 1e-4);
}

#[test]
fn check_identities_reports_all_four_and_passes() {
    let out = run(&["check-identities"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    for name in ["five_term", "six_term", "reflection", "cocycle"] {
        assert!(
            lines.iter().any(|l| l.starts_with(name) && l.ends_with("PASS")),
            "missing PASS line for {name} in {text}"
        );
    }
}

#[test]
fn check_identities_can_select_one() {
    let out = run(&["check-identities", "--which", "reflection"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("reflection:"));
}

#[test]
fn solve_zero_rhs_reproduces_the_dilogarithm() {
    let constant = format!("{ZETA2:.16}");
    let out = run(&[
        "solve",
        "--rhs",
        "zero",
        "--constant",
        &constant,
        "--xs",
        "0.25,0.5,0.75",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (headers, rows) = parse_csv(&stdout_of(&out));
    assert_eq!(headers, ["x", "solution"]);
    for (row, x) in rows.iter().zip([0.25, 0.5, 0.75]) {
        let v = row[1].expect("solution value");
        assert!(
            (v - rogers_reference(x).unwrap()).abs() <= 1e-6,
            "x={x}: {v} vs {}",
            rogers_reference(x).unwrap()
        );
    }
    assert!(stderr_of(&out).contains("residual summary"));
}

#[test]
fn solve_cosine_builtin_recovers_the_series() {
    let out = run(&[
        "solve", "--rhs", "tau3:cos1", "--constant", "0", "--xs", "0.3,0.7",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (_, rows) = parse_csv(&stdout_of(&out));
    for (row, x) in rows.iter().zip([0.3f64, 0.7]) {
        let v = row[1].expect("solution value");
        let want = (std::f64::consts::PI * x).cos();
        assert!((v - want).abs() <= 2e-4, "x={x}: {v} vs {want}");
    }
}

#[test]
fn solve_reads_cosine_series_files() {
    let path = scratch("series.json");
    std::fs::write(
        &path,
        r#"{"type": "tau3_of_cosine_series", "coeffs": [0.25]}"#,
    )
    .unwrap();
    let out = run(&[
        "solve",
        "--rhs",
        path.to_str().unwrap(),
        "--constant",
        "0",
        "--xs",
        "0.25",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (_, rows) = parse_csv(&stdout_of(&out));
    let v = rows[0][1].expect("solution value");
    let want = 0.25 * (std::f64::consts::PI * 0.25).cos();
    assert!((v - want).abs() <= 1e-4, "{v} vs {want}");
}

#[test]
fn solve_reads_grid_files() {
    let mut points = Vec::new();
    for x in [0.2, 0.5, 0.8] {
        for y in [0.2, 0.5, 0.8] {
            points.push(format!("[{x}, {y}, 0.0]"));
        }
    }
    let path = scratch("grid-zero.json");
    std::fs::write(
        &path,
        format!(r#"{{"type": "grid", "points": [{}]}}"#, points.join(", ")),
    )
    .unwrap();
    let constant = format!("{ZETA2:.16}");
    let out = run(&[
        "solve",
        "--rhs",
        path.to_str().unwrap(),
        "--constant",
        &constant,
        "--xs",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    let (_, rows) = parse_csv(&stdout_of(&out));
    let v = rows[0][1].expect("solution value");
    assert!(
        (v - rogers_reference(0.5).unwrap()).abs() <= 1e-6,
        "{v} vs dilogarithm at 1/2"
    );
}

#[test]
fn solve_rejects_bad_rhs_specs() {
    // even frequency breaks the reflection symmetry
    let out = run(&["solve", "--rhs", "tau3:cos2", "--constant", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("odd"));

    // missing file
    let out = run(&["solve", "--rhs", "no-such-rhs.json", "--constant", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cannot read rhs file"));

    // unparseable payload
    let path = scratch("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["solve", "--rhs", path.to_str().unwrap(), "--constant", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("malformed rhs file"));

    // incomplete lattice
    let path = scratch("tiny-grid.json");
    std::fs::write(&path, r#"{"type": "grid", "points": [[0.2, 0.2, 0.0]]}"#).unwrap();
    let out = run(&["solve", "--rhs", path.to_str().unwrap(), "--constant", "0"]);
    assert_eq!(out.status.code(), Some(2));

    // clap-level error: required argument missing
    let out = run(&["eval-rogers"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_rejects_inadmissible_rhs_with_a_sample() {
    let grid: Vec<f64> = vec![0.15, 0.4, 0.65, 0.9];
    let mut points = Vec::new();
    for &x in &grid {
        for &y in &grid {
            points.push(format!("[{x}, {y}, {}]", x * y));
        }
    }
    let path = scratch("inadmissible.json");
    std::fs::write(
        &path,
        format!(r#"{{"type": "grid", "points": [{}]}}"#, points.join(", ")),
    )
    .unwrap();
    let out = run(&["solve", "--rhs", path.to_str().unwrap(), "--constant", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("failing sample"), "stderr: {err}");
}

#[test]
fn stability_emits_reproducible_json_lines() {
    let args = [
        "stability",
        "--trials",
        "3",
        "--amplitude",
        "0.01",
        "--modes",
        "2",
        "--seed",
        "5",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_of(&first));
    assert_eq!(first.stdout, second.stdout, "reports must be reproducible");
    let text = stdout_of(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).expect("json report line");
        let o = v.as_object().unwrap();
        for key in ["epsilon", "c_offset", "deviation", "bound", "ratio", "metadata"] {
            assert!(o.contains_key(key), "missing {key} in {line}");
        }
        assert!(o["ratio"].as_f64().unwrap() <= 1.0);
    }
}

#[test]
fn config_file_feeds_defaults_and_flags_override() {
    let path = scratch("config.json");
    // the reconstruction is essentially exact, so only a sub-epsilon
    // threshold can trip the gate
    std::fs::write(&path, r#"{"tolerance": 1e-30, "format": "json"}"#).unwrap();

    // the file's unreachable tolerance makes the gate fail...
    let out = run(&[
        "eval-rogers",
        "--xs",
        "0.3",
        "--config",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    // ...and its format choice is honored
    assert!(serde_json::from_str::<serde_json::Value>(&stdout_of(&out)).is_ok());

    // a flag beats the file
    let out = run(&[
        "eval-rogers",
        "--xs",
        "0.3",
        "--config",
        path.to_str().unwrap(),
        "--tolerance",
        "0.01",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));

    // unknown keys are rejected outright
    let bad = scratch("bad-config.json");
    std::fs::write(&bad, r#"{"no_such_key": 1}"#).unwrap();
    let out = run(&["eval-rogers", "--xs", "0.5", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_table_to_a_file() {
    let path = scratch("table.csv");
    let out = bin()
        .args([
            "eval-rogers",
            "--xs",
            "0.4",
            "--mode",
            "reference",
            "--out",
            path.to_str().unwrap(),
        ])
        .env("SPENCE_ABEL_THREADS", "1")
        .output()
        .expect("binary should run");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_of(&out));
    assert!(out.stdout.is_empty(), "table should go to the file");
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("x,rogers_new,rogers_ref,abs_diff"));
    assert_eq!(written.lines().count(), 2);
}
