use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_extpoincare"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_report(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = run(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn all_pass(report: &Value) -> bool {
    report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == Value::Bool(true))
}

#[derive(Debug, serde::Deserialize)]
struct Row {
    phi_rad: f64,
    trials: u64,
    kept: u64,
    discarded: u64,
    n_pp: u64,
    n_pm: u64,
    n_mp: u64,
    n_mm: u64,
    e_xx: Option<f64>,
    stderr: Option<f64>,
    expected: f64,
}

fn rows(path: &Path) -> Vec<Row> {
    csv::Reader::from_path(path).unwrap().deserialize().collect::<Result<_, _>>().unwrap()
}

#[test]
fn group_check_default_passes() {
    let r = json_report(&["group-check"]);
    assert!(all_pass(&r));
    assert!(r["checks"].as_array().unwrap().iter().any(|c| c["name"] == "lambda_inf_maps_p0_to_minus_p0"));
    assert!(!r["info"]["conjugation"].as_array().unwrap().is_empty());
}

#[test]
fn group_check_coordinate_convention_skips_momentum_checks() {
    let r = json_report(&["group-check", "--convention", "coordinate"]);
    assert!(all_pass(&r));
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["name"] != "lambda_inf_maps_p0_to_minus_p0"));
    assert!(r["notices"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("Λ∞p₀ = +p₀")));
}

#[test]
fn group_check_rejects_zero_samples() {
    let o = run(&["group-check", "--samples", "0"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("samples"));
}

#[test]
fn orbit_classes() {
    let classes = |p: [&str; 4]| -> Vec<String> {
        let mut args = vec!["orbit"];
        args.extend(p);
        json_report(&args)["images"]
            .as_array()
            .unwrap()
            .iter()
            .map(|i| i["class"].as_str().unwrap().to_string())
            .collect()
    };
    assert_eq!(classes(["1", "0", "0", "0"]), ["massive-forward", "massive-backward", "tachyonic", "tachyonic"]);
    let light = classes(["1", "0", "0", "1"]);
    assert!(light.iter().all(|c| c == "lightlike-forward" || c == "lightlike-backward"));
    assert!(light.contains(&"lightlike-forward".into()) && light.contains(&"lightlike-backward".into()));
    let o = run(&["orbit", "0", "0", "0", "0"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with("zero")));
}

#[test]
fn rep_check_edge_cases_pass() {
    assert!(all_pass(&json_report(&["rep-check"])));
    assert!(all_pass(&json_report(&["rep-check", "--helicity", "0"])));
    assert!(all_pass(&json_report(&["rep-check", "--grid-size", "1"])));
}

#[test]
fn bell_check_passes() {
    for n in ["1", "8"] {
        let r = json_report(&["bell-check", "--grid-size", n]);
        assert!(all_pass(&r), "{r}");
        let ln2 = r["info"]["entropy_bell_nats"].as_f64().unwrap();
        assert!((ln2 - std::f64::consts::LN_2).abs() < 1e-12);
    }
}

#[test]
fn experiment_run_ideal_is_near_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = run(&[
        "experiment",
        "run",
        "--phi",
        "0",
        "--trials",
        "1000000",
        "--seed",
        "42",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let r = rows(&out);
    assert_eq!(r.len(), 1);
    let row = &r[0];
    assert_eq!(row.trials, 1_000_000);
    assert_eq!(row.kept + row.discarded, row.trials);
    assert_eq!(row.n_pp + row.n_pm + row.n_mp + row.n_mm, row.kept);
    assert!((row.e_xx.unwrap() - 1.0).abs() <= 4.0 * row.stderr.unwrap() + 1e-12);
    assert_eq!(row.expected, 1.0);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 42);
    assert_eq!(manifest["config"]["trials"], 1_000_000);
    for key in ["command", "version", "timestamp", "seed_derivation"] {
        assert!(manifest.get(key).is_some(), "{key}");
    }
}

#[test]
fn csv_header_is_exact() {
    let o = run(&["experiment", "run", "--trials", "10"]);
    assert_eq!(
        stdout(&o).lines().next().unwrap(),
        "phi_rad,trials,kept,discarded,n_pp,n_pm,n_mp,n_mm,e_xx,stderr,expected"
    );
}

#[test]
fn sweep_flips_sign_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| dir.path().join(name);
    let sweep = |name: &str, workers: &str| {
        let o = run(&[
            "experiment",
            "sweep",
            "--trials",
            "100000",
            "--visibility",
            "0.9",
            "--dark",
            "0.01",
            "--sigma",
            "0.2",
            "--seed",
            "7",
            "--workers",
            workers,
            "--out",
            path(name).to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(path(name)).unwrap()
    };
    let a = sweep("a.csv", "4");
    let b = sweep("b.csv", "4");
    let c = sweep("c.csv", "1");
    assert_eq!(a, b);
    assert_eq!(a, c);

    let r = rows(&path("a.csv"));
    assert_eq!(r.len(), 17);
    for row in &r {
        let e = row.e_xx.unwrap();
        if row.phi_rad.cos().abs() > 0.5 {
            assert_eq!(e.signum(), row.phi_rad.cos().signum(), "φ = {}", row.phi_rad);
        }
        assert!((row.expected - 0.9 * (-0.02f64).exp() * row.phi_rad.cos()).abs() < 1e-15);
    }

    // rerunning from the manifest reproduces the CSV bitwise
    let manifest = path("a.csv.manifest.json");
    let o =
        run(&["experiment", "sweep", "--config", manifest.to_str().unwrap(), "--out", path("d.csv").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(path("d.csv")).unwrap(), a);
}

#[test]
fn zero_efficiency_is_not_an_error() {
    let o = run(&["experiment", "run", "--eta", "0", "--trials", "1000"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("no coincidences"));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    assert_eq!(row, "0.0,1000,0,1000,0,0,0,0,,,1.0");
}

#[test]
fn input_errors_point_at_keys() {
    let o = run(&["experiment", "run", "--visibility", "1.5"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("`visibility`"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"phi": 0.5, "dark": 1.0}"#).unwrap();
    let o = run(&["experiment", "run", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("`dark`"));

    fs::write(&cfg, "{ not json").unwrap();
    let o = run(&["experiment", "run", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("malformed JSON"));
}

#[test]
fn flags_override_config_and_inputs_are_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    let text = r#"{"phi": 3.141592653589793, "trials": 2000, "seed": 5, "visibility": 0.5}"#;
    fs::write(&cfg, text).unwrap();
    let o = run(&["experiment", "run", "--config", cfg.to_str().unwrap(), "--visibility", "1", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["manifest"]["config"]["visibility"], 1.0);
    assert_eq!(doc["manifest"]["config"]["trials"], 2000);
    assert_eq!(doc["rows"][0]["e_xx"], -1.0);
    assert_eq!(fs::read_to_string(&cfg).unwrap(), text);

    let o = run(&["experiment", "run", "--config", cfg.to_str().unwrap(), "--out", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert_eq!(fs::read_to_string(&cfg).unwrap(), text);
}
