//! End-to-end checks of the `dwall` binary: exit codes, stream separation,
//! CSV schemas, config merging, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn dwall(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dwall"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary should launch")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be UTF-8")
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("reading {name}: {e}"))
}

#[test]
fn csv_output_is_byte_identical_across_runs() {
    let args = ["limit-nu0", "--coordinate", "x", "--grid-n", "257"];
    let a = TempDir::new().expect("tempdir");
    let b = TempDir::new().expect("tempdir");
    let out_a = dwall(a.path(), &args);
    let out_b = dwall(b.path(), &args);
    assert!(
        out_a.status.success(),
        "first run failed: {}",
        stderr(&out_a)
    );
    assert!(
        out_b.status.success(),
        "second run failed: {}",
        stderr(&out_b)
    );
    assert_eq!(stdout(&out_a), stdout(&out_b), "summaries should match");
    let csv_a = read(a.path(), "limit-nu0.csv");
    let csv_b = read(b.path(), "limit-nu0.csv");
    assert_eq!(csv_a, csv_b, "CSV bytes should be identical across runs");
    assert!(!csv_a.is_empty(), "CSV should carry data");
}

#[test]
fn csv_uses_unix_newlines_and_plain_numbers() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(dir.path(), &["eta", "--epsilon", "0.25", "--grid-n", "257"]);
    assert!(out.status.success(), "eta failed: {}", stderr(&out));
    let text = String::from_utf8(read(dir.path(), "eta.csv")).expect("CSV should be UTF-8");
    assert!(!text.contains('\r'), "CSV must use \\n line endings only");
    assert!(text.ends_with('\n'), "CSV should end with a newline");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,eta,eta0"), "header row");
    let first = lines.next().expect("at least one data row");
    assert_eq!(first.split(',').count(), 3, "three columns per row");
    for field in first.split(',') {
        let v: f64 = field
            .parse()
            .unwrap_or_else(|e| panic!("field `{field}`: {e}"));
        assert!(v.is_finite(), "fields should parse as finite floats");
    }
}

#[test]
fn flags_override_config_file() {
    let with_config = TempDir::new().expect("tempdir");
    let flags_only = TempDir::new().expect("tempdir");
    let conf = with_config.path().join("run.conf");
    std::fs::write(&conf, "epsilon = 0.1\ngrid_n = 257\n").expect("write config");

    let out = dwall(
        with_config.path(),
        &["eta", "--config", "run.conf", "--epsilon", "0.25"],
    );
    assert!(out.status.success(), "config run failed: {}", stderr(&out));
    let out2 = dwall(
        flags_only.path(),
        &["eta", "--epsilon", "0.25", "--grid-n", "257"],
    );
    assert!(out2.status.success(), "flag run failed: {}", stderr(&out2));
    assert_eq!(
        read(with_config.path(), "eta.csv"),
        read(flags_only.path(), "eta.csv"),
        "flag should override the config epsilon while keeping its grid_n"
    );
}

#[test]
fn out_flag_redirects_the_csv() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(
        dir.path(),
        &[
            "eta",
            "--epsilon",
            "0.25",
            "--grid-n",
            "257",
            "--out",
            "custom.csv",
        ],
    );
    assert!(out.status.success(), "eta failed: {}", stderr(&out));
    assert!(
        dir.path().join("custom.csv").exists(),
        "--out path should be written"
    );
    assert!(
        !dir.path().join("eta.csv").exists(),
        "default path should stay untouched"
    );
}

#[test]
fn summary_goes_to_stdout_only() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(dir.path(), &["eta", "--epsilon", "0.25", "--grid-n", "257"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.starts_with("eta:"),
        "summary should name the subcommand: {text}"
    );
    assert!(
        text.contains("converged=true"),
        "summary should report convergence"
    );
    assert!(
        text.contains("energy_f="),
        "summary should report the energy"
    );
    assert_eq!(text.lines().count(), 1, "exactly one summary line");
    assert!(stderr(&out).is_empty(), "no diagnostics on success");
}

#[test]
fn unknown_flag_exits_2() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(dir.path(), &["eta", "--epsilon", "0.25", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("--frobnicate"),
        "usage error should list the offending flag: {}",
        stderr(&out)
    );
}

#[test]
fn missing_required_flag_exits_2_and_names_it() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(dir.path(), &["eta"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("--epsilon"),
        "error should name the missing flag: {}",
        stderr(&out)
    );
}

#[test]
fn range_violation_exits_2_and_names_the_key() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(dir.path(), &["eta", "--epsilon", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("epsilon"),
        "error should name the parameter: {}",
        stderr(&out)
    );
}

#[test]
fn config_errors_carry_the_line_number() {
    let dir = TempDir::new().expect("tempdir");
    let conf = dir.path().join("bad.conf");
    std::fs::write(&conf, "epsilon = 0.1\nwavelength = 3\n").expect("write config");
    let out = dwall(dir.path(), &["eta", "--config", "bad.conf"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "error should give the line: {err}");
    assert!(
        err.contains("wavelength"),
        "error should give the key: {err}"
    );
}

#[test]
fn non_convergence_exits_3_with_header_only_csv() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(
        dir.path(),
        &[
            "wall",
            "--epsilon",
            "0.1",
            "--gamma",
            "3",
            "--grid-n",
            "257",
            "--max-iter",
            "5",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(
        stdout(&out).contains("converged=false"),
        "summary should still report: {}",
        stdout(&out)
    );
    assert!(
        stderr(&out).contains("no convergence"),
        "diagnostic should say why: {}",
        stderr(&out)
    );
    let text = String::from_utf8(read(dir.path(), "wall.csv")).expect("CSV should exist");
    assert_eq!(
        text, "x,psi1,psi2\n",
        "failed solve leaves the schema in place"
    );
}

#[test]
fn split_scan_rows_carry_a_converged_column() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(
        dir.path(),
        &[
            "split-scan",
            "--epsilon",
            "0.1",
            "--gamma",
            "3",
            "--grid-n",
            "257",
            "--alpha-min",
            "0.4",
            "--alpha-max",
            "0.6",
            "--steps",
            "3",
        ],
    );
    assert!(out.status.success(), "scan failed: {}", stderr(&out));
    let text = String::from_utf8(read(dir.path(), "split-scan.csv")).expect("CSV");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,s,energy,kind,converged"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3, "one row per scan point");
    for row in rows {
        assert!(
            row.ends_with(",true"),
            "row should end with converged flag: {row}"
        );
    }
}

#[test]
fn wall_find_alpha_reports_the_root() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(
        dir.path(),
        &[
            "wall",
            "--epsilon",
            "0.1",
            "--gamma",
            "3",
            "--grid-n",
            "513",
            "--find-alpha",
        ],
    );
    assert!(out.status.success(), "find-alpha failed: {}", stderr(&out));
    let text = stdout(&out);
    let alpha0: f64 = text
        .split_whitespace()
        .find_map(|kv| kv.strip_prefix("alpha0="))
        .expect("summary should carry alpha0=")
        .parse()
        .expect("alpha0 should be numeric");
    assert!(
        (alpha0 - 0.5).abs() < 0.02,
        "alpha0 = {alpha0} should sit near one half"
    );
    let csv = String::from_utf8(read(dir.path(), "wall.csv")).expect("CSV");
    assert_eq!(csv.lines().next(), Some("x,psi1,psi2"));
    assert_eq!(csv.lines().count(), 514, "header plus one row per node");
}

#[test]
fn bifurcation_csv_has_measured_and_predicted_columns() {
    let dir = TempDir::new().expect("tempdir");
    let out = dwall(
        dir.path(),
        &["bifurcation", "--eps-list", "0.1", "--grid-n", "513"],
    );
    assert!(out.status.success(), "sweep failed: {}", stderr(&out));
    let text = String::from_utf8(read(dir.path(), "bifurcation.csv")).expect("CSV");
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,gamma0,gamma0_pred"));
    let row = lines.next().expect("one data row");
    let fields: Vec<f64> = row
        .split(',')
        .map(|s| s.parse().expect("numeric"))
        .collect();
    assert_eq!(fields.len(), 3);
    assert!(
        (fields[0] - 0.1).abs() < 1e-15,
        "eps column echoes the input"
    );
    assert!(
        fields[1] > 1.0 && fields[2] > 1.0,
        "both thresholds exceed 1"
    );
    assert!(
        (fields[1] - fields[2]).abs() < 0.05,
        "measured {} and predicted {} should agree loosely",
        fields[1],
        fields[2]
    );
}

#[test]
fn help_and_version_exit_0() {
    let dir = TempDir::new().expect("tempdir");
    let help = dwall(dir.path(), &["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(
        stdout(&help).contains("limit-nu0"),
        "help lists the subcommands"
    );
    let version = dwall(dir.path(), &["--version"]);
    assert_eq!(version.status.code(), Some(0));
}
