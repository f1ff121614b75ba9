use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_action-waves");

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (header, rows) = parse_csv(text);
    let idx = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[idx]).collect()
}

#[test]
fn golden_outputs_are_reproduced() {
    let cases: &[(&str, &[&str])] = &[
        ("expand_w1_n12.csv", &["expand", "--w", "1", "--nmax", "12"]),
        (
            "expand_w2.5_n8.json",
            &["expand", "--w", "2.5", "--nmax", "8", "--format", "json"],
        ),
        ("sweep_w5_n30.csv", &["sweep", "--w", "5", "--nmax", "30"]),
        (
            "duality_s10_hbar1.json",
            &["duality", "--s", "10", "--hbar", "1"],
        ),
        (
            "timewave_t0_0.5.csv",
            &[
                "timewave", "--s", "1", "--hbar", "1", "--e", "1", "--t0", "0", "--t1", "0.5",
                "--steps", "6",
            ],
        ),
        (
            "expand_grid_w3.csv",
            &["expand", "--w", "3", "--grid", "--steps", "9"],
        ),
    ];
    for (file, args) in cases {
        let expected = fs::read(golden(file)).unwrap();
        assert_eq!(run(args).stdout, expected, "{file} differs");
    }
}

#[test]
fn out_flag_writes_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let p = path.to_str().unwrap();
        let out = run(&["sweep", "--w", "5", "--nmax", "30", "--out", p]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(
        fs::read(&a).unwrap(),
        fs::read(golden("sweep_w5_n30.csv")).unwrap()
    );
}

#[test]
fn csv_contract() {
    let text = stdout(&["expand", "--w", "1", "--nmax", "12"]);
    assert!(text.starts_with("n,J_n,re_coeff,im_coeff,re_partial,im_partial,abs_error,bound\n"));
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    for line in text.lines().skip(1) {
        for field in line.split(',').skip(1) {
            if field == "inf" {
                continue;
            }
            let mantissa = field.trim_start_matches('-').split('e').next().unwrap();
            assert_eq!(mantissa.replace('.', "").len(), 17, "{field}");
        }
    }
}

#[test]
fn expand_examples() {
    let text = stdout(&["expand", "--w", "0", "--nmax", "3"]);
    assert_eq!(text.lines().count(), 5);
    assert!(column(&text, "re_partial").iter().all(|&v| v == 1.0));
    assert!(column(&text, "im_partial").iter().all(|&v| v == 0.0));

    let text = stdout(&["expand", "--w", "1", "--nmax", "12"]);
    assert!(*column(&text, "abs_error").last().unwrap() <= 1e-12);
}

#[test]
fn domain_errors_exit_two() {
    let out = run(&["expand", "--w", "-1", "--nmax", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("w = -1"), "{err}");

    let out = run(&["expand", "--w", "20000"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["duality", "--s", "0", "--hbar", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("S = 0"));

    let out = run(&["sweep", "--w", "1", "--nmax", "-3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nmax"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["expand"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--w", "abc"]).status.code(), Some(2));
}

#[test]
fn sweep_examples() {
    let text = stdout(&["sweep", "--w", "0", "--nmax", "10"]);
    assert!(column(&text, "abs_error").iter().all(|&v| v == 0.0));

    let text = stdout(&["sweep", "--w", "5", "--nmax", "30"]);
    let n = column(&text, "n_max");
    let err = column(&text, "abs_error");
    let bound = column(&text, "bound");
    let first_small = err.iter().position(|&e| e < 1e-12).unwrap();
    assert!(n[first_small] < 30.0);
    for k in 0..err.len() {
        if bound[k].is_finite() {
            assert!(err[k] <= bound[k], "n_max={}", n[k]);
        }
        if k > 0 && n[k - 1] >= 5.0 {
            assert!(err[k] <= err[k - 1] + 4.0 * f64::EPSILON, "n_max={}", n[k]);
        }
    }
}

#[test]
fn timewave_rows() {
    let text = stdout(&[
        "timewave", "--s", "1", "--hbar", "1", "--e", "1", "--t0", "0", "--t1", "0.5", "--steps",
        "6",
    ]);
    let diffs = column(&text, "abs_diff");
    assert_eq!(diffs.len(), 6);
    assert!(diffs[0] <= 1e-12);
    assert!(diffs.iter().all(|&d| d <= 1e-10), "{diffs:?}");

    // first row is the static reconstruction at the same order
    let n = stdout(&["expand", "--w", "1", "--nmax", "232"]);
    let re = column(&n, "re_partial");
    let im = column(&n, "im_partial");
    assert_eq!(column(&text, "re_sum")[0], *re.last().unwrap());
    assert_eq!(column(&text, "im_sum")[0], *im.last().unwrap());
}

#[test]
fn timewave_overflow_exits_three() {
    let out = run(&[
        "timewave", "--s", "1", "--hbar", "1", "--e", "1", "--t0", "1", "--t1", "1", "--steps",
        "1", "--nmax", "400",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("132"), "{err}");
}

#[test]
fn duality_examples() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["duality", "--s", "1", "--hbar", "1"])).unwrap();
    assert_eq!(v["w_classical"], 1.0);
    assert_eq!(v["w_quantum"], 1.0);
    assert_eq!(v["swap_check"], true);

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["duality", "--s", "10", "--hbar", "1"])).unwrap();
    assert_eq!(v["regime"], "SEMICLASSICAL");
    assert!(v["reconstruct_error"].as_f64().unwrap() <= 1e-12);
    assert!(v["dual_reconstruct_error"].as_f64().unwrap() <= 1e-12);

    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["duality", "--s", "0.1", "--hbar", "1"])).unwrap();
    assert_eq!(v["regime"], "STRONG_QUANTUM");
}

#[test]
fn verify_passes_and_is_deterministic() {
    let a = run(&["verify", "--seed", "11"]);
    let b = run(&["verify", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_below_roundoff_fails() {
    let out = run(&["verify", "--tol", "1e-16"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
