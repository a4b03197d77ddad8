use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rrho_cli::output::{RunManifest, Table};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rrho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrho")).args(args).output().unwrap()
}

fn cfg(name: &str) -> String {
    configs().join(name).to_string_lossy().into_owned()
}

fn stdout_table(out: &Output) -> Table {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    Table::from_csv(std::str::from_utf8(&out.stdout).unwrap()).unwrap()
}

fn value(t: &Table, col: &str) -> f64 {
    t.column(col).unwrap()[0].parse().unwrap()
}

fn write_json(dir: &Path, name: &str, v: &serde_json::Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p.to_string_lossy().into_owned()
}

fn table4() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(cfg("table4-baseline.json")).unwrap()).unwrap()
}

#[test]
fn analytic_table4_report() {
    let out = rrho(&["analytic", "--config", &cfg("table4-baseline.json")]);
    let t = stdout_table(&out);
    assert!((value(&t, "p_rr") - 0.999).abs() < 1e-3);
    assert!((value(&t, "p_ho") - 0.036).abs() < 1e-3);
    for col in ["e_rr", "e_ho", "e_sb", "e_so", "e_gamma", "e_gamma_factored"] {
        assert!(t.column(col).is_some(), "missing {col}");
    }
    let manifest: RunManifest = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(manifest.command, "analytic");
    assert_eq!(manifest.config_digest.unwrap().len(), 64);
}

#[test]
fn zero_densities_give_zero_event_rates() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = table4();
    v["lambda_ris"]["value"] = 0.0.into();
    v["lambda_enb"]["value"] = 0.0.into();
    let t = stdout_table(&rrho(&["analytic", "--config", &write_json(dir.path(), "z.json", &v)]));
    for col in ["p_rr", "p_ho", "e_rr", "e_ho", "e_so"] {
        assert_eq!(value(&t, col), 0.0, "{col}");
    }
}

#[test]
fn malformed_config_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ \"kind\": \"unknown\", ").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = rrho(&["analytic", "--config", bad.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_path.exists());
    assert!(out.stdout.is_empty());
}

#[test]
fn validation_error_names_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = table4();
    v["signaling"]["p_a"] = 1.5.into();
    let out = rrho(&["analytic", "--config", &write_json(dir.path(), "p.json", &v)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("p_a"));
    let mut v = table4();
    v["lambda_ris"]["unit"] = "per-acre".into();
    assert_eq!(rrho(&["analytic", "--config", &write_json(dir.path(), "u.json", &v)]).status.code(), Some(2));
}

#[test]
fn geometry_failure_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cfg("table3-no-obstacle.json")).unwrap()).unwrap();
    // In front of the wall the UE is not shadowed from the eNB.
    v["ue_start"] = serde_json::json!([2.0, 4.0]);
    let out = rrho(&["analytic", "--config", &write_json(dir.path(), "front.json", &v)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn simulate_rows() {
    let one = stdout_table(&rrho(&["simulate", "--config", &cfg("table3-no-obstacle.json"), "--trials", "1", "--seed", "5"]));
    assert!(matches!(one.column("mean").unwrap()[0], "0" | "1"));
    let a = rrho(&["simulate", "--config", &cfg("table4-baseline.json"), "--trials", "2000", "--seed", "3"]);
    let b = rrho(&["simulate", "--config", &cfg("table4-baseline.json"), "--trials", "2000", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let t = stdout_table(&a);
    assert_eq!(t.column("estimator").unwrap(), vec!["mc_rr", "mc_ho"]);
    assert_eq!(t.column("trials").unwrap(), vec!["2000", "2000"]);
    let out = rrho(&["simulate", "--config", &cfg("table3-no-obstacle.json"), "--kind", "ho"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_agrees_with_closed_form() {
    let closed = value(&stdout_table(&rrho(&["analytic", "--config", &cfg("table3-no-obstacle.json")])), "p_rr");
    let t = stdout_table(&rrho(&["simulate", "--config", &cfg("table3-no-obstacle.json"), "--trials", "100000", "--seed", "11"]));
    let (mean, se) = (value(&t, "mean"), value(&t, "stderr"));
    assert!((mean - closed).abs() <= 3.0 * se, "mc {mean} se {se} closed {closed}");
}

#[test]
fn sweep_writes_ordered_csv_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = rrho(&["sweep", "--config", &cfg("sweep-lambda-ris.json"), "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&out_path).unwrap();
    let t = Table::from_csv(&text).unwrap();
    assert_eq!(t.to_csv().unwrap(), text);
    assert_eq!(t.header[0], "lambda_RIS");
    let xs: Vec<f64> = t.column("lambda_RIS").unwrap().iter().map(|s| s.parse().unwrap()).collect();
    assert!(xs.windows(2).all(|w| w[0] < w[1]));
    let e_ho = t.column("e_ho").unwrap();
    assert!(e_ho.iter().all(|v| *v == e_ho[0]));
    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!((manifest.command.as_str(), manifest.seed), ("sweep", Some(1)));
}

#[test]
fn sweep_simulated_columns_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let spec: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cfg("sweep-table3-density.json")).unwrap()).unwrap();
    let path = write_json(dir.path(), "s.json", &spec);
    let run = |name: &str| {
        let p = dir.path().join(name);
        let out = rrho(&["sweep", "--config", &path, "--trials", "2000", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        std::fs::read(p).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let t = Table::from_csv(std::str::from_utf8(&a).unwrap()).unwrap();
    assert_eq!(t.header, vec!["lambda_RIS", "p_rr", "mc_rr", "mc_rr_stderr"]);
    assert_eq!(t.rows.len(), 5);
}

#[test]
fn bad_sweeps_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let base: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cfg("sweep-lambda-ris.json")).unwrap()).unwrap();
    let out_path = dir.path().join("o.csv");
    let check = |v: serde_json::Value, name: &str| {
        let p = write_json(dir.path(), name, &v);
        let out = rrho(&["sweep", "--config", &p, "--out", out_path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out_path.exists(), "{name} left output behind");
    };
    let mut v = base.clone();
    v["outputs"] = serde_json::json!([]);
    check(v, "empty-outputs.json");
    let mut v = base.clone();
    v["values"] = serde_json::json!([0.1, 0.3, 0.2]);
    check(v, "unordered.json");
    let mut v = base.clone();
    v["variable"] = "d_U".into();
    v["values"] = serde_json::json!([2.0, -1.0]);
    check(v, "bad-point.json");
    let mut v = base;
    v["variable"] = "volume".into();
    check(v, "bad-variable.json");
}

#[test]
fn dimension_counts() {
    let servers = |file: &str, threshold: &str| {
        let t = stdout_table(&rrho(&["dimension", "--config", &cfg(file), "--threshold", threshold, "--kind", "rism"]));
        t.column("servers").unwrap()[0].parse::<usize>().unwrap()
    };
    assert_eq!(servers("calibrated-dimensioning-10ms.json", "55"), 2);
    assert_eq!(servers("calibrated-dimensioning-15ms.json", "55"), 4);
    assert_eq!(servers("calibrated-dimensioning-15ms.json", "1000"), 1);
    let out = rrho(&["dimension", "--config", &cfg("table4-baseline.json"), "--threshold", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = rrho(&["dimension", "--config", &cfg("table4-baseline.json"), "--threshold", "0.000001"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn protocol_traces() {
    let rr = rrho(&["protocol", "--kind", "rr"]);
    assert!(rr.status.success());
    let text = String::from_utf8(rr.stdout).unwrap();
    assert_eq!(text.lines().count(), 14);
    assert!(text.contains("7 | serving-eNB -> RIS-M | RR request"));
    let ho = rrho(&["protocol", "--kind", "ho", "--mode", "x2"]);
    assert_eq!(String::from_utf8(ho.stdout).unwrap().lines().count(), 17);
    let s1 = rrho(&["protocol", "--kind", "ho", "--mode", "s1"]);
    assert!(String::from_utf8(s1.stdout).unwrap().contains("HO required"));
    assert_ne!(rrho(&["protocol", "--kind", "handover"]).status.code(), Some(0));
    assert_eq!(rrho(&["protocol", "--kind", "sgw"]).status.code(), Some(2));
}

#[test]
fn protocol_load_table() {
    let t = stdout_table(&rrho(&["protocol", "--config", &cfg("table4-baseline.json"), "--duration", "200", "--seed", "2"]));
    let entities = t.column("entity").unwrap();
    assert!(entities.contains(&"RIS-M") && entities.contains(&"rr_initiation"));
}
