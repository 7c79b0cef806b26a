// SPDX-License-Identifier: MIT OR Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn msi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msi"))
        .args(args)
        .output()
        .expect("msi runs")
}

fn msi_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_msi"))
        .args(args)
        .env(key, value)
        .output()
        .expect("msi runs")
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn mobius(n: i64) -> i64 {
    let (mut m, mut sign, mut p) = (n, 1, 2);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// Literal double loop for g = μ cut at `q`, in f64.
fn literal_integral(n: i64, h: i64, q: i64) -> f64 {
    let mut total = 0.0;
    for x in n + 1..=2 * n {
        let mut dev = 0.0;
        for m in (x - h).max(1)..=x + h {
            let weight = 1.0 - (m - x).abs() as f64 / h as f64;
            let f: i64 = (1..=q.min(m)).filter(|d| m % d == 0).map(mobius).sum();
            dev += weight * f as f64;
        }
        let mean: f64 = (1..=q.min(x + h)).map(|d| mobius(d) as f64 / d as f64).sum();
        dev -= h as f64 * mean;
        total += dev * dev;
    }
    total
}

#[test]
fn farey_csv_matches_golden() {
    let out = msi(&["farey", "--q", "5", "--csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("farey_q5.csv"));
}

#[test]
fn farey_rejects_small_order() {
    assert_eq!(msi(&["farey", "--q", "1"]).status.code(), Some(2));
}

#[test]
fn divisor_sieve_matches_golden() {
    let out = msi(&["sieve", "--kind", "divisor", "--n", "12"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), golden("divisor_n12.csv"));
}

#[test]
fn integral_csv_schema_and_value() {
    let out = msi(&[
        "integral",
        "--n",
        "30",
        "--h",
        "2",
        "--q",
        "5",
        "--g",
        "mobius",
        "--decompose",
        "--csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(format!("{}\n", lines.next().unwrap()), golden("integral_header.csv"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 10);
    assert_eq!(&row[..4], &["30", "2", "5", "mobius"]);
    let direct: f64 = row[4].parse().unwrap();
    let total: f64 = row[5].parse().unwrap();
    let oracle = literal_integral(30, 2, 5);
    assert!((direct - oracle).abs() <= 1e-9 * (1.0 + oracle));
    assert!((total - direct).abs() <= 1e-8 * (1.0 + direct));
}

#[test]
fn integral_json_mirrors_report_fields() {
    let out = msi(&[
        "integral",
        "--n",
        "40",
        "--h",
        "4",
        "--q",
        "7",
        "--g",
        "unit",
        "--decompose",
        "--json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in [
        "N",
        "h",
        "Q",
        "g",
        "diagonal",
        "near_delta",
        "near_sigma",
        "far_delta",
        "far_sigma",
        "total",
        "direct",
        "abs_gap",
    ] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert!(doc["far_part"]["ratio_to_ah"].is_number());
}

#[test]
fn integral_budget_is_a_resource_error() {
    let out = msi(&[
        "integral",
        "--n",
        "400",
        "--h",
        "4",
        "--q",
        "60",
        "--decompose",
        "--pair-budget",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fraction pairs"));
}

#[test]
fn integral_rejects_odd_h() {
    assert_eq!(
        msi(&["integral", "--n", "40", "--h", "3", "--q", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_json_schema() {
    let out = msi(&["verify", "--suite", "farey", "--quick", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["suite"], "farey");
    assert_eq!(doc["pass"], true);
    for prop in doc["properties"].as_array().unwrap() {
        for key in ["property", "instances", "max_error", "pass"] {
            assert!(prop.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn verify_unknown_suite_is_usage_error() {
    assert_eq!(msi(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path| {
        vec![
            "sweep".to_string(),
            "--n-values".into(),
            "256,512,1024".into(),
            "--g".into(),
            "random:9".into(),
            "--big-g".into(),
            "unit".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let run_a: Vec<String> = args(&a);
    let run_b: Vec<String> = args(&b);
    let out = msi(&run_a.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = msi_env(
        &run_b.iter().map(String::as_str).collect::<Vec<_>>(),
        "MSI_THREADS",
        "1",
    );
    assert!(out.status.success());
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with(&golden("sweep_header.csv")));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn sweep_rejects_majorant_violation() {
    let out = msi(&["sweep", "--n-values", "256", "--g", "unit", "--big-g", "mobius"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_reports_unwritable_path() {
    let out = msi(&["sweep", "--n-values", "64", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn bad_thread_count_is_usage_error() {
    assert_eq!(
        msi_env(&["farey", "--q", "3"], "MSI_THREADS", "0").status.code(),
        Some(2)
    );
}
