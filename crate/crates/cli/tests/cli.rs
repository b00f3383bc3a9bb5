use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn roughlim(config: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_roughlim"));
    cmd.arg("run").arg(config).args(args).env_remove("ROUGHLIM_BUDGET");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SCAN_31: &str = r#"{"sequence": {"kind": "Example31"}, "analysis": {"kind": "scan", "set": "rough-stat-limit", "r": 2}}"#;
const PARITY: &str = r#"{"sequence": {"kind": "Drift"}, "analysis": {"kind": "density", "set": {"kind": "parity"}}}"#;

#[test]
fn scan_writes_report_and_plot_data() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "scan.json", SCAN_31);
    let (report, csv) = (dir.path().join("report.json"), dir.path().join("grid.csv"));
    let out = roughlim(&cfg, &["--out", report.to_str().unwrap(), "--csv", csv.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["results"]["kind"], "scan");
    assert_eq!(v["results"]["set"]["intervals"], serde_json::json!([{"lo": -1.0, "hi": 1.0}]));
    let csv = std::fs::read_to_string(&csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("beta,verdict,density_last"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 801);
    assert!(rows[0].starts_with("-4,nonmember,"));
    assert!(rows[400].starts_with("0,member,"));
}

#[test]
fn empty_set_scan_is_all_nonmember() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sub.json",
        r#"{"sequence": {"kind": "Subsequence", "a": {"kind": "Example32"}, "map": {"kind": "Squares"}},
            "analysis": {"kind": "scan", "set": "rough-stat-limit", "r": 1}}"#,
    );
    let csv = dir.path().join("grid.csv");
    let out = roughlim(&cfg, &["--csv", csv.to_str().unwrap()], &[]);
    assert_eq!(stdout_json(&out)["results"]["set"]["intervals"], serde_json::json!([]));
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(1) == Some("nonmember")));
}

#[test]
fn cluster_scan_has_two_runs() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "lam.json",
        r#"{"sequence": {"kind": "Example31"}, "analysis": {"kind": "scan", "set": "rough-cluster", "r": 0.5}}"#,
    );
    let v = stdout_json(&roughlim(&cfg, &[], &[]));
    let ivs = v["results"]["set"]["intervals"].as_array().unwrap().clone();
    assert_eq!(ivs.len(), 2);
    assert!(ivs[0]["lo"].as_f64().unwrap() < -1.0 && ivs[0]["hi"].as_f64().unwrap() > -1.0);
    assert!(ivs[1]["lo"].as_f64().unwrap() < 1.0 && ivs[1]["hi"].as_f64().unwrap() > 1.0);
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = TempDir::new().unwrap();
    let gauss = write_config(
        &dir,
        "gauss.json",
        "{\n  \"sequence\": {\"kind\": \"Example31\"},\n  \"pnorm\": \"gauss\",\n  \"analysis\": {\"kind\": \"scan\", \"set\": \"rough-cluster\", \"r\": 1}\n}",
    );
    let out = roughlim(&gauss, &[], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pnorm") && stderr(&out).contains("gauss"), "{}", stderr(&out));

    let malformed = write_config(&dir, "bad.json", "{\n  \"sequence\": {\"kind\": \"Example31\"},\n  \"analysis\": \n}");
    let out = roughlim(&malformed, &[], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let unknown = write_config(&dir, "seq.json", r#"{"sequence": {"kind": "Fibonacci"}, "analysis": {"kind": "eval", "indices": [[1, 1]]}}"#);
    let out = roughlim(&unknown, &[], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sequence"), "{}", stderr(&out));

    let out = roughlim(&dir.path().join("missing.json"), &[], &[]);
    assert_eq!(out.status.code(), Some(2));

    let csv_without_scan = write_config(&dir, "p.json", PARITY);
    let out = roughlim(&csv_without_scan, &["--csv", dir.path().join("x.csv").to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));

    let out = roughlim(&csv_without_scan, &[], &[("ROUGHLIM_BUDGET", "lots")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3_and_flag_beats_env() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "parity.json", PARITY);
    assert_eq!(roughlim(&cfg, &["--budget", "1000"], &[]).status.code(), Some(3));
    assert_eq!(roughlim(&cfg, &[], &[("ROUGHLIM_BUDGET", "1000")]).status.code(), Some(3));
    let v = stdout_json(&roughlim(&cfg, &["--budget", "300000"], &[("ROUGHLIM_BUDGET", "1000")]));
    assert_eq!(v["config"]["tolerances"]["budget"], 300000);
    assert_eq!(v["results"]["estimate"]["verdict"], "Positive");
    let scan = write_config(&dir, "scan.json", SCAN_31);
    assert_eq!(roughlim(&scan, &[], &[("ROUGHLIM_BUDGET", "200000")]).status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_4() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "parity.json", PARITY);
    let bad = dir.path().join("no/such/dir/report.json");
    assert_eq!(roughlim(&cfg, &["--out", bad.to_str().unwrap()], &[]).status.code(), Some(4));
    let scan = write_config(&dir, "scan.json", SCAN_31);
    let out = roughlim(&scan, &["--csv", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(4));
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_ms");
    v
}

#[test]
fn reports_are_deterministic_and_echo_round_trips() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "member.json",
        r#"{"sequence": {"kind": "Sum", "a": {"kind": "Example31"}, "b": {"kind": "Constant", "value": 0.1}},
            "pnorm": "menger", "analysis": {"kind": "member", "set": "rough-cluster", "point": 1.1, "r": 0.5}, "seed": 9}"#,
    );
    let a = roughlim(&cfg, &[], &[]);
    let b = roughlim(&cfg, &[], &[]);
    let (va, vb) = (stdout_json(&a), stdout_json(&b));
    assert_eq!(without_wall_time(va.clone()), without_wall_time(vb));
    assert_eq!(va["results"]["verdict"], "Member");

    let echo = write_config(&dir, "echo.json", &serde_json::to_string(&va["config"]).unwrap());
    let vc = stdout_json(&roughlim(&echo, &[], &[]));
    assert_eq!(vc["config"], va["config"]);
    let parsed = roughlim_cli::parse(&std::fs::read_to_string(&echo).unwrap()).unwrap();
    assert_eq!(roughlim_cli::parse(&serde_json::to_string(&parsed).unwrap()).unwrap(), parsed);
}

#[test]
fn eval_density_and_rough_limit_analyses() {
    let dir = TempDir::new().unwrap();
    let eval = write_config(&dir, "eval.json", r#"{"sequence": {"kind": "Example31"}, "analysis": {"kind": "eval", "indices": [[4, 9], [2, 3]]}}"#);
    let v = stdout_json(&roughlim(&eval, &[], &[]));
    assert_eq!(v["results"]["values"][0]["value"], serde_json::json!([36.0]));
    assert_eq!(v["results"]["values"][1]["value"], serde_json::json!([-1.0]));

    let dens = write_config(
        &dir,
        "dens.json",
        r#"{"sequence": {"kind": "Example32"}, "analysis": {"kind": "density", "set": {"kind": "exception", "point": 0, "t": 1, "lambda": 0.5}}}"#,
    );
    let v = stdout_json(&roughlim(&dens, &[], &[]));
    assert_eq!(v["results"]["estimate"]["counts"], serde_json::json!([64, 121, 256, 484]));
    assert_eq!(v["results"]["estimate"]["verdict"], "Zero");

    let lim = write_config(
        &dir,
        "lim.json",
        r#"{"sequence": {"kind": "Alternating"}, "analysis": {"kind": "member", "set": "rough-limit", "point": 0, "r": 1, "horizon": 512}}"#,
    );
    assert_eq!(stdout_json(&roughlim(&lim, &[], &[]))["results"]["verdict"], "Member");
}

#[test]
fn theorem_suite_reports_every_check() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "suite.json",
        r#"{"sequence": {"kind": "Example32"}, "grid": {"lo": -4, "hi": 4, "step": 0.05},
            "analysis": {"kind": "theorem-suite", "r": 1, "options": {"coarse_step": 0.1, "fine_step": 0.05, "axiom_samples": 200}}}"#,
    );
    let out = roughlim(&cfg, &["--seed", "5"], &[]);
    let v = stdout_json(&out);
    let reports = v["results"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 14);
    let ids: std::collections::BTreeSet<&str> = reports.iter().map(|r| r["theorem"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 14);
    let lit = reports.iter().find(|r| r["theorem"] == "linearity-literal").unwrap();
    assert_eq!(lit["verdict"], "Fail");
    assert!(!lit["witnesses"].as_array().unwrap().is_empty());
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["results"]["axioms"][0]["seed"], 5);
}
