use std::process::{Command, Output};

fn dirac1d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac1d")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_table(text: &str) -> Vec<Vec<String>> {
    text.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn bound_json(args: &[&str]) -> Vec<serde_json::Value> {
    let o = dirac1d(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn catalog_lists_models() {
    let o = dirac1d(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["free", "centrifugal", "nogami_toyama", "super_scarf", "scalar_one_bound"] {
        assert!(stdout(&o).contains(name), "{name} missing");
    }
    let o = dirac1d(&["catalog", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.as_array().unwrap().len() >= 6);
}

#[test]
fn scatter_csv_layout_and_order() {
    let o = dirac1d(&["scatter", "--model", "nogami_toyama", "--E-min", "2.5", "--E-max", "4", "--E-count", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = csv_table(&stdout(&o));
    assert_eq!(t.len(), 5);
    assert_eq!(t[0].len(), 18);
    assert_eq!(t[0][0], "E");
    assert_eq!(t[0][17], "status");
    let es: Vec<f64> = t[1..].iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(es, vec![2.5, 3.0, 3.5, 4.0]);
    for row in &t[1..] {
        assert_eq!(row.len(), 18);
        assert_eq!(row[17], "ok");
        if row[15] == "true" {
            let abs_r: f64 = row[8].parse().unwrap();
            assert!(abs_r <= 1e-6, "pt_exact row with |R| = {abs_r}");
        }
    }
}

#[test]
fn sequential_output_is_byte_identical() {
    let args = ["scatter", "--model", "super_scarf", "--E-min", "2.3", "--E-max", "3", "--E-count", "7"];
    let a = dirac1d(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let b = dirac1d(&seq);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn failed_rows_are_marked() {
    let o = dirac1d(&["scatter", "--model", "nogami_toyama", "--E-min", "1.5", "--E-max", "3", "--E-count", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let t = csv_table(&stdout(&o));
    assert_eq!(t.len(), 3);
    assert!(t[1][17].starts_with("error"));
    assert_eq!(t[2][17], "ok");
}

#[test]
fn parser_errors_exit_2_with_caret() {
    let o = dirac1d(&["scatter", "--expr-V", "2 * (x", "--E-min", "2", "--E-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("syntax error"), "{err}");
    assert!(err.contains('^'));
    let o = dirac1d(&["scatter", "--expr-V", "sec(x)", "--E-min", "2", "--E-max", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown function"));
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(dirac1d(&["scatter", "--model", "nope", "--E-min", "2", "--E-max", "3"]).status.code(), Some(2));
    assert_eq!(dirac1d(&["scatter", "--model", "free"]).status.code(), Some(2));
    assert_eq!(dirac1d(&["bound", "--model", "free", "--param", "mass=2"]).status.code(), Some(2));
    assert_eq!(dirac1d(&["scatter", "--bogus"]).status.code(), Some(2));
    assert_eq!(dirac1d(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": "free", "params": {"m": 1.0}, "e_min": 1.5, "e_max": 2.5, "e_count": 2, "format": "csv"}"#).unwrap();
    let out = dir.path().join("rows.csv");
    let o = dirac1d(&["scatter", "--config", cfg.to_str().unwrap(), "--E-count", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = csv_table(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(t.len(), 4);
    for row in &t[1..] {
        let abs_t: f64 = row[5].parse().unwrap();
        assert!((abs_t - 1.0).abs() < 1e-9);
    }

    std::fs::write(&cfg, r#"{"model": "free", "typo": 1}"#).unwrap();
    let o = dirac1d(&["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_rows_carry_schema() {
    let o = dirac1d(&["scatter", "--model", "scalar_one_bound", "--E-min", "1.2", "--E-max", "2", "--E-count", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "dirac1d-pt/1");
    assert_eq!(v["model"]["kind"], "scalar_one_bound");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["rows"][0]["status"], "ok");
}

#[test]
fn expression_model_is_reciprocal() {
    let o = dirac1d(&[
        "scatter", "--expr-V", "c/cosh(x)^2", "--expr-S", "c/cosh(x)^2", "--param", "c=0.3", "--E-min", "1.2", "--E-max", "2",
        "--E-count", "3",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for row in &csv_table(&stdout(&o))[1..] {
        let f = |i: usize| row[i].parse::<f64>().unwrap();
        assert!((f(3) - f(9)).abs() < 1e-8 && (f(4) - f(10)).abs() < 1e-8, "{row:?}");
    }
}

#[test]
fn bound_scalar_single_state() {
    let v = bound_json(&["bound", "--model", "scalar_one_bound"]);
    assert_eq!(v.len(), 1);
    let e = v[0]["E"].as_f64().unwrap();
    assert!((e - 2.0 / 5f64.sqrt()).abs() < 1e-8, "E = {e}");
    assert_eq!(v[0]["kind"], "bound");
    assert_eq!(v[0]["norm_ok"], true);
}

#[test]
fn bound_free_is_empty() {
    assert!(bound_json(&["bound", "--model", "free"]).is_empty());
}

#[test]
fn bound_super_scarf_partners_share_levels() {
    let v = bound_json(&["bound", "--model", "super_scarf", "--param", "n=2", "--param", "l=1"]);
    let energies = |p: u64| -> Vec<f64> { v.iter().filter(|r| r["partner"] == p).map(|r| r["E"].as_f64().unwrap()).collect() };
    let (u1, u2) = (energies(1), energies(2));
    assert!(!u1.is_empty());
    assert_eq!(u2.len(), u1.len() + 1);
    for e in &u1 {
        assert!(u2.iter().any(|f| (e - f).abs() < 1e-8), "{e} not shared");
    }
    // E = 2 at kappa = 1 is the n - 1 level
    assert!(u1.iter().any(|e| (e - 2.0).abs() < 1e-8));
    assert!((u2[0] + 1.0).abs() < 1e-8);
}

#[test]
fn verify_suite_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = dirac1d(&["verify", "--suite", "formalism", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "dirac1d-pt/1");
    assert_eq!(v["passed"], true);
}

#[test]
fn poeschl_teller_rows_are_reflectionless() {
    let o = dirac1d(&["scatter", "--model", "poeschl_teller", "--param", "lambda=2", "--E-min", "2.3", "--E-max", "3.7", "--E-count", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = csv_table(&stdout(&o));
    assert_eq!(t.len(), 11);
    for row in &t[1..] {
        let abs_t: f64 = row[5].parse().unwrap();
        let abs_r: f64 = row[8].parse().unwrap();
        assert!((abs_t - 1.0).abs() <= 1e-7, "|T| = {abs_t} at E = {}", row[0]);
        assert!(abs_r <= 1e-7, "|R| = {abs_r} at E = {}", row[0]);
    }
}

#[test]
fn scarf_dirac_reflects() {
    let o = dirac1d(&["scatter", "--model", "scarf_dirac", "--param", "l=1", "--param", "n=1", "--param", "c=1", "--E-min", "1.05", "--E-max", "4", "--E-count", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let t = csv_table(&stdout(&o));
    let max_r = t[1..].iter().map(|r| r[8].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(max_r > 1e-3, "max |R| = {max_r}");
}
