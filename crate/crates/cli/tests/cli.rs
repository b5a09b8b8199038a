use serde_json::Value;
use std::process::{Command, Output};

fn squeeze(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_squeeze")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn vacuum_element_routes_agree() {
    let o = squeeze(&["element", "--m", "0", "--n", "0", "--r", "1.5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    for key in ["inputs", "outputs", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let routes = v["outputs"]["routes"].as_object().unwrap();
    assert_eq!(routes.len(), 4);
    let want = 1.0 / 1.5f64.cosh().sqrt();
    for (_, r) in routes {
        assert!((r["re"].as_f64().unwrap() - want).abs() < 1e-15);
    }
    assert_eq!(v["checks"][0]["name"], "route_agreement");
    assert_eq!(v["checks"][0]["passed"], true);
}

#[test]
fn odd_parity_element_is_zero() {
    let o = squeeze(&["element", "--m", "1", "--n", "0", "--r", "1.0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["outputs"]["note"].as_str().unwrap().contains("parity"));
    for (_, r) in v["outputs"]["routes"].as_object().unwrap() {
        assert_eq!(r["re"].as_f64().unwrap(), 0.0);
        assert_eq!(r["im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn element_with_oracle() {
    let o = squeeze(&["element", "--m", "4", "--n", "2", "--r", "0.8", "--phi", "1.0", "--with-oracle"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert!(v["outputs"]["oracle"]["dim"].as_u64().unwrap() >= 256);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["route_agreement", "oracle_agreement"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn argument_errors_exit_2() {
    assert_eq!(code(&squeeze(&["element", "--m", "0", "--n", "0", "--r", "-1"])), 2);
    assert_eq!(code(&squeeze(&["element", "--m", "0", "--n", "0"])), 2);
    assert_eq!(code(&squeeze(&["element", "--m", "0", "--n", "0", "--r", "1", "--tol", "0"])), 2);
    assert_eq!(code(&squeeze(&["figure", "fig4"])), 2);
    assert_eq!(code(&squeeze(&["thermal", "--k", "1", "--r", "0.5", "--b", "1.5"])), 2);
    assert_eq!(code(&squeeze(&["thermal", "--k", "1", "--r", "0.5", "--b", "0.5", "--nbar", "1"])), 2);
    assert_eq!(code(&squeeze(&["validate", "--tier", "medium"])), 2);
    assert_eq!(code(&squeeze(&["nonsense"])), 2);
    assert_eq!(code(&squeeze(&["--version"])), 0);
}

#[test]
fn disagreement_exits_3() {
    let o = squeeze(&["thermal", "--k", "2", "--r", "0.7", "--nbar", "1.5", "--tol", "1e-20"]);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["passed"], false);
    assert!(String::from_utf8_lossy(&o.stderr).contains("check failed: emission_sum"));
}

#[test]
fn cutoff_exits_4() {
    let o = squeeze(&["distribution", "--n", "0", "--r", "3", "--cap", "10"]);
    assert_eq!(code(&o), 4);
    assert!(o.stdout.is_empty());
}

#[test]
fn figure_csv_format() {
    let o = squeeze(&["figure", "fig1a"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(!text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("m,p"));
    let mut total = 0.0;
    for (i, line) in lines.enumerate() {
        let (m, p) = line.split_once(',').unwrap();
        assert_eq!(m.parse::<u64>().unwrap(), 2 * i as u64);
        let digits = p.split('e').next().unwrap().replace(['.', '-'], "");
        assert_eq!(digits.len(), 17, "{p}");
        total += p.parse::<f64>().unwrap();
    }
    assert!((total - 1.0).abs() < 1e-9);
    assert!(String::from_utf8_lossy(&o.stderr).contains("mean energy 5.03"));
}

#[test]
fn figure_json_checks() {
    let v = json(&squeeze(&["figure", "fig3", "--format", "json"]));
    assert!(v["outputs"]["interior_maxima"].as_u64().unwrap() >= 5);
    let v = json(&squeeze(&["figure", "fig2b", "--format", "json"]));
    assert!(v["outputs"]["sup_distance_to_exact"].as_f64().unwrap() <= 0.02);
    let o = squeeze(&["figure", "fig2b", "--tol", "0.001"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["figure", "fig3"][..],
        &["compare", "--b", "0.99,0.02", "--format", "csv"],
        &["element", "--m", "6", "--n", "2", "--r", "1.2", "--phi", "-0.4"],
        &["superpose", "coherent", "--k", "1", "--alpha", "1.2", "--beta", "0.8", "--beta-arg", "0.7", "--r", "0.6"],
    ] {
        let a = squeeze(args);
        let b = squeeze(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig1b.csv");
    let o = squeeze(&["figure", "fig1b", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), squeeze(&["figure", "fig1b"]).stdout);
}

#[test]
fn compare_regimes() {
    let v = json(&squeeze(&["compare", "--b", "0.99,0.02", "--k", "0,1,2,3"]));
    let rows = v["outputs"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in &rows[1..4] {
        assert_eq!(row["regime"], "rayleigh_jeans");
        assert!((row["ratio"].as_f64().unwrap() - 1.0).abs() < 0.06);
    }
    let wien = &rows[6];
    assert_eq!(wien["order"], 2);
    assert_eq!(wien["regime"], "wien");
    assert!(wien["ratio"].as_f64().unwrap() > 2000.0);
}

#[test]
fn superpose_identities() {
    let o = squeeze(&[
        "superpose",
        "coherent",
        "--k",
        "2",
        "--alpha",
        "1.2",
        "--alpha-arg",
        "0.3",
        "--beta",
        "0.8",
        "--beta-arg",
        "-0.7",
        "--r",
        "0.9",
        "--phi",
        "0.4",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["checks"][0]["name"], "coherent_identity");
    let o = squeeze(&["superpose", "gaussian", "--k", "3", "--gamma", "0.5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn distribution_csv_and_json() {
    let o = squeeze(&["distribution", "--n", "1", "--r", "0.5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("m,p\n1,"));
    let v = json(&squeeze(&["distribution", "--n", "1", "--r", "0.5", "--format", "json"]));
    let e = v["outputs"]["mean_energy"].as_f64().unwrap();
    assert!((e - 1.5 * 1.0f64.cosh()).abs() < 1e-9);
}

#[test]
fn validate_fast_tier_with_env_threads() {
    let o = Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(["validate", "--tier", "fast"])
        .env("SQUEEZE_VALIDATE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["inputs"]["threads"], 2);
    assert_eq!(v["outputs"]["passed"], true);
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"route_agreement:element_legendre"));
    assert!(names.contains(&"oracle_agreement"));

    let bad = Command::new(env!("CARGO_BIN_EXE_squeeze"))
        .args(["validate"])
        .env("SQUEEZE_VALIDATE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}
