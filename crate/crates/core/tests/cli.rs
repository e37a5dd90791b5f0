use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sharpness"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn values(csv: &str) -> Vec<f64> {
    csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect()
}

#[test]
fn measure_projection() {
    let o = run(&["measure", data("projection.json").to_str().unwrap(), "-m", "S0,S1,S2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("measure,dim,value\n"));
    assert_eq!(values(&out), vec![1.0, 1.0, 1.0]);
}

#[test]
fn measure_trivial_biases() {
    let o = run(&["measure", data("trivial.json").to_str().unwrap(), "-m", "B0,B5"]);
    for v in values(&stdout(&o)) {
        assert!((v + 0.4).abs() < 1e-12);
    }
}

#[test]
fn measure_flat_spectrum_json() {
    let o = run(&["measure", data("flat3.json").to_str().unwrap(), "-m", "Sa,S1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"][0]["value"], 1.0);
    assert_eq!(v["rows"][1]["value"], 0.75);
}

#[test]
fn csv_values_round_trip() {
    let o = run(&["measure", data("flat3.json").to_str().unwrap()]);
    let out = stdout(&o);
    for line in out.lines().skip(1) {
        let field = line.rsplit(',').next().unwrap();
        let x: f64 = field.parse().unwrap();
        assert_eq!(format!("{x:.16e}"), field);
    }
}

#[test]
fn invalid_inputs_exit_2() {
    let flat = data("flat3.json");
    let flat = flat.to_str().unwrap();
    assert_eq!(run(&["measure", flat, "-m", "Sa,Nope"]).status.code(), Some(2));
    assert_eq!(run(&["measure", flat, "-m", "Sb2"]).status.code(), Some(2));
    assert_eq!(run(&["measure", data("not_effect.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["measure", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["coexist", data("pair_invalid.json").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--a0", "0.2", "--ra", "0.3"]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--r", "0.5:0.1:0.1"]).status.code(), Some(2));
    assert_eq!(run(&["--tol", "-1", "spectrum", flat]).status.code(), Some(2));
}

#[test]
fn coexist_exit_codes() {
    let o = run(&["coexist", data("pair_coexistent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lhs"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert_eq!(v["status"], "Coexistent");

    let o = run(&["coexist", data("pair_incompatible.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["lhs"].as_f64().unwrap() - 0.9632).abs() < 1e-12);

    let o = run(&["coexist", "--oracle", data("pair_equal.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["oracle"]["feasible"], true);
    assert!(v["oracle"]["witness"].is_object());
}

#[test]
fn coexist_marginal_exit_3() {
    let dir = std::env::temp_dir().join(format!("sharpness-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let r = 1.0 / 8f64.sqrt();
    let path = dir.join("marginal.json");
    std::fs::write(&path, format!(r#"{{"A": {{"a0": 0.5, "a": [{r}, 0, 0]}}, "B": {{"a0": 0.5, "a": [0, {r}, 0]}}}}"#))
        .unwrap();
    assert_eq!(run(&["coexist", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn spectrum_reports_width_and_dispersion() {
    let o = run(&["spectrum", data("flat3.json").to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["width"], 1.0);
    assert_eq!(v["dispersion"], 0.25);
    assert_eq!(v["eigenvalues"], serde_json::json!([0.0, 0.5, 1.0]));
}

#[test]
fn scan_examples() {
    let o = run(&["scan", "--r", "0:0.5:0.01"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("a0,b0,ra,rb,angle_deg,lhs,verdict"));
    let verdicts: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
    let flip = verdicts.iter().position(|v| *v == "NotCoexistent").unwrap();
    assert_eq!(flip, 36);
    assert!(verdicts[..flip].iter().all(|v| *v == "Coexistent"));

    let o = run(&["scan", "--ra", "0", "--rb", "0:0.5:0.1", "--angle", "0:180:30"]);
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",Coexistent")));
    let o = run(&["scan", "--ra", "0:0.5:0.1", "--rb", "0:0.5:0.1", "--angle", "0"]);
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",Coexistent")));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("sharpness-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scan.csv");
    let o = run(&["scan", "--r", "0.1:0.2:0.05", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);
}

#[test]
fn verify_counterexamples_passes() {
    let o = run(&["verify", "counterexamples", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
