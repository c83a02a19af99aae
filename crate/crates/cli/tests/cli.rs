use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperholo"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn records(path: &Path) -> Vec<Value> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn verify_power_one_passes_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "verify",
            "--set",
            "generators=power:1",
            "--set",
            "window.count=30",
            "--out",
            "o",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let recs = records(&dir.path().join("o/verify.jsonl"));
    assert_eq!(recs.len(), 6);
    assert!(recs
        .iter()
        .all(|r| r["verdict"] == "pass" && r["timestamp"].is_u64()));
    let csv = std::fs::read_to_string(dir.path().join("o/verify-summary.csv")).unwrap();
    assert!(csv.starts_with("name,max_residual,tolerance,passed\n"));
    let leftovers: Vec<_> = std::fs::read_dir(dir.path().join("o")).unwrap().collect();
    assert_eq!(leftovers.len(), 2);
}

#[test]
fn unknown_generator_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--set", "generators=bogus:q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus:q"));
}

#[test]
fn expect_fail_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "generators = power:1, nonex:conj\nexpect_fail = nonex:conj\nwindow.count = 30\n",
    )
    .unwrap();
    let out = run(dir.path(), &["verify", "--config", "run.cfg", "--out", "o"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("XFAIL hyperholomorphic[nonex:conj]"));
    assert!(stdout.contains("SKIP  fueter-theorem[nonex:conj]"));

    let out = run(
        dir.path(),
        &[
            "verify",
            "--set",
            "generators=power:1,nonex:conj",
            "--set",
            "window.count=30",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn suite_flag_selects_suites() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "verify",
            "--set",
            "generators=exp",
            "--suite",
            "cr",
            "--suite",
            "equivalence",
            "--out",
            "o",
            "--no-timestamp",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&dir.path().join("o/verify.jsonl"));
    let names: Vec<_> = recs
        .iter()
        .map(|r| r["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, ["cr[exp]", "equivalence[exp]"]);
    assert!(recs.iter().all(|r| r.get("timestamp").is_none()));
}

#[test]
fn integral_on_torus() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "integral",
            "--set",
            "generators=power:2",
            "--set",
            "regions=torus(0,2,1)",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&dir.path().join("o/integral.jsonl"));
    assert_eq!(recs.len(), 2);
    for r in recs {
        assert!(r["rel_diff"].as_f64().unwrap() < 1e-6);
        assert_eq!(r["lhs"].as_array().unwrap().len(), 4);
        assert_eq!(r["region"], "torus(0,2,1)");
        assert!(r["spec"].is_string() && r["abs_diff"].is_f64());
    }
}

#[test]
fn region_touching_axis_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "integral",
            "--set",
            "generators=power:2",
            "--set",
            "regions=torus(0,2,2.5)",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("region touches real axis"));
}

#[test]
fn convergence_table_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "convergence",
            "--set",
            "generators=exp",
            "--set",
            "regions=sphere(0,2,0,0,1)",
            "--set",
            "specs=8x8x8x8,16x16x16x16,32x32x32x32",
            "--out",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("o/convergence-0-0.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("spec,abs_diff,ratio"));
    let diffs: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(diffs.len(), 3);
    assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
}

#[test]
fn gauss_selftest_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "gauss-selftest",
            "--set",
            "gauss.fields=2",
            "--set",
            "spec=16x16x16x8",
            "--out",
            "o",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(records(&dir.path().join("o/gauss.jsonl")).len(), 6);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |o: &'static str| {
        vec![
            "verify",
            "--set",
            "generators=exp,mul(power:2,exp)",
            "--set",
            "window.count=25",
            "--seed",
            "11",
            "--no-timestamp",
            "--out",
            o,
        ]
    };
    assert_eq!(run(dir.path(), &args("a")).status.code(), Some(0));
    assert_eq!(run(dir.path(), &args("b")).status.code(), Some(0));
    for f in ["verify.jsonl", "verify-summary.csv"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        assert_eq!(a, b, "{f}");
    }
}

#[test]
fn lists_generators() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["list-generators"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("power:n") && text.contains("nonex:radial"));
}
