//! Golden-file tests pinning the CLI output schemas byte for byte.

use std::process::Command;

fn spec_path(name: &str) -> String {
    format!("{}/../../specs/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_arith-fractal"))
        .args(args)
        .env_remove("ARITH_FRACTAL_WORKERS")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        out.status.code().unwrap(),
    )
}

#[test]
fn golden_verify() {
    let (out, code) = run(&[
        "verify",
        "--spec",
        &spec_path("digits_03.json"),
        "--window",
        "1000",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        r#"{
  "checked_count": 8,
  "density_sum": "1/5",
  "density_sum_value": 0.2,
  "element_count": 8,
  "gap_witnesses": [],
  "overlap_witnesses": [],
  "safe_window": "9997",
  "seed_only": [],
  "status": "verified",
  "uncovered_seeds": [],
  "window": "1000"
}
"#
    );
}

#[test]
fn golden_generate() {
    let (out, code) = run(&[
        "generate",
        "--spec",
        &spec_path("digits_03.json"),
        "--window",
        "400",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        r#"{
  "count": 8,
  "elements": [
    "0",
    "3",
    "30",
    "33",
    "300",
    "303",
    "330",
    "333"
  ],
  "window": "400"
}
"#
    );
}

#[test]
fn golden_member() {
    let (out, code) = run(&[
        "member",
        "--spec",
        &spec_path("digits_03.json"),
        "--element",
        "303",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        r#"{
  "depth_cap": 10000,
  "element": "303",
  "result": "yes"
}
"#
    );
    let (_, code) = run(&[
        "member",
        "--spec",
        &spec_path("digits_03.json"),
        "--element",
        "7",
    ]);
    assert_eq!(code, 1);
}

#[test]
fn golden_dim_text() {
    let (out, code) = run(&["dim", "--weights", "10:1,10:1,10:1", "--tol", "1e-12"]);
    assert_eq!(code, 0);
    assert_eq!(out, "0.477121254720\n");
}

#[test]
fn golden_count_series_csv() {
    let (out, code) = run(&[
        "estimate-dim",
        "--spec",
        &spec_path("digits_03.json"),
        "--thresholds",
        "10,100,1000,10000",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out, "threshold,count\n10,2\n100,4\n1000,8\n10000,16\n");
}

#[test]
fn golden_census_ffield_csv() {
    let (out, code) = run(&[
        "census-ffield",
        "--q",
        "2",
        "--n",
        "1",
        "--d",
        "0,1,2,3",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "x,observed,predicted,rel_error\n\
         0,3,1.500000,1.000000\n\
         1,6,6.000000,0.000000\n\
         2,24,24.000000,0.000000\n\
         3,96,96.000000,0.000000\n"
    );
}

#[test]
fn golden_census_pn_json() {
    let (out, code) = run(&["census-pn", "--n", "1", "--x", "5,10"]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        r#"{
  "constant": 1.215854203708049,
  "fitted_exponent": 1.6780719051126367,
  "n": 1,
  "rows": [
    {
      "observed": 40,
      "predicted": 30.396355092701228,
      "rel_error": 0.31594725347858565,
      "x": 5.0
    },
    {
      "observed": 128,
      "predicted": 121.58542037080491,
      "rel_error": 0.052757802782868506,
      "x": 10.0
    }
  ]
}
"#
    );
}

#[test]
fn golden_error_objects() {
    let out = Command::new(env!("CARGO_BIN_EXE_arith-fractal"))
        .args(["verify", "--spec", "/does/not/exist.json", "--window", "10"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(doc["error"]["kind"], "input");

    let out = Command::new(env!("CARGO_BIN_EXE_arith-fractal"))
        .args(["census-pn", "--n", "2", "--x", "1000", "--budget", "1000"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(doc["error"]["kind"], "budget");
}
