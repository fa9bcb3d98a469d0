use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_barotropic");

const BASE: &str = r#"
[grid]
n = 32

[fluid]
gamma = 2.0
viscosity = "constant"
mu0 = 2.0

[force]
kind = "constant"
value = 1.0

[initial]
rho = "sine"
rho_amplitude = 0.2
rho_wavenumber = 2.0
rho_add_stationary = true

[run]
scenario = "cli"
t_end = 1.0
sample_every = 0.25
"#;

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(" = ")))
        .unwrap_or_else(|| panic!("{key} missing from\n{text}"))
}

fn num(text: &str, key: &str) -> f64 {
    value(text, key).parse().unwrap()
}

#[test]
fn run_succeeds_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", BASE);
    let out = dir.path().join("out");
    let o = run(&["run", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(value(&stdout(&o), "status"), "completed");
    for f in [
        "diagnostics.csv",
        "stationary.csv",
        "final_state.csv",
        "summary.txt",
    ] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let typo = write(dir.path(), "typo.toml", &BASE.replace("gamma", "gama"));
    let o = run(&["run", &typo]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gama"));

    let bad = write(
        dir.path(),
        "bad.toml",
        &BASE.replace("gamma = 2.0", "gamma = 1.0"),
    );
    let o = run(&["stationary", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fluid.gamma"));

    assert_eq!(
        run(&["run", "/nonexistent/config.toml"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["run"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn infeasible_stationary_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        &BASE.replace("value = 1.0", "value = 8.0"),
    );
    let out = dir.path().join("out");
    let o = run(&["stationary", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!out.join("stationary.csv").exists());

    let o = run(&["check-condition", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(value(&s, "holds"), "false");
    assert!((num(&s, "lhs") - 2.0).abs() < 1e-12);
}

#[test]
fn stationary_writes_profile() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", BASE);
    let out = dir.path().join("out");
    let o = run(&["stationary", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let k = num(&stdout(&o), "kappa");
    assert!((k - 0.75).abs() < 1e-9, "{k}");
    let csv = fs::read_to_string(out.join("stationary.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 33);
}

#[test]
fn numerical_abort_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("{BASE}\n").replace(
        "rho_add_stationary = true\n",
        "rho_add_stationary = true\nu = \"poly\"\nu_coeffs = [0.0, 1e300, -1e300]\n",
    );
    let cfg = write(dir.path(), "c.toml", &text);
    let out = dir.path().join("out");
    let o = run(&["run", &cfg, "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(value(&summary, "status").starts_with("aborted"));
}

#[test]
fn check_condition_reports_hypotheses() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", BASE);
    let o = run(&["check-condition", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(value(&s, "holds"), "true");
    assert!((num(&s, "lhs") - 0.25).abs() < 1e-12);
    assert_eq!(value(&s, "strong_solution_hypotheses"), "true");
}

#[test]
fn compat_of_rest_state_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let text = BASE
        .replace("rho = \"sine\"", "rho = \"constant\"\nrho_value = 1.0")
        .replace(
            "rho_amplitude = 0.2\nrho_wavenumber = 2.0\nrho_add_stationary = true\n",
            "",
        )
        .replace("kind = \"constant\"\nvalue = 1.0", "kind = \"zero\"");
    let cfg = write(dir.path(), "c.toml", &text);
    let o = run(&["compat", &cfg]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let s = stdout(&o);
    assert_eq!(value(&s, "residual"), "0");
    assert_eq!(value(&s, "excluded_faces"), "0");
}

#[test]
fn converge_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", BASE);
    let out = dir.path().join("out");
    let o = run(&[
        "converge",
        &cfg,
        "--resolutions",
        "16,32,64",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(out.join("convergence.csv").exists());
    assert!(out.join("n64").join("diagnostics.csv").exists());
    let o = run(&["converge", &cfg, "--resolutions", "16,24,48"]);
    assert_eq!(o.status.code(), Some(2));
}
