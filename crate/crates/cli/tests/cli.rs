use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use lgq::specfun::{bessel_k0, EULER_GAMMA};

fn lgq(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgq")).current_dir(dir).args(args).output().expect("spawn lgq")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    std::fs::write(dir.join(name), text).unwrap();
    name.to_owned()
}

#[test]
fn polymer_example_solves_the_lattice_equation() {
    let dir = tempfile::tempdir().unwrap();
    let out = lgq(dir.path(), &["polymer", "--alpha", "1", "--n", "8", "--l0", "1", "--output", "poly"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("poly.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("kappa,E,residual"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').map(|f| f.parse().unwrap()).collect();
    let (kappa, residual) = (fields[0], fields[2]);
    assert!(residual < 1e-10);
    // bottom of the band of a chain with spacing 1/8 and coupling 1 per point,
    // written as a direct lattice sum of K₀ instead of the dual series
    let h = 1.0 / 8.0;
    let mut lattice = 0.0;
    for j in 1.. {
        let term = bessel_k0(kappa * h * j as f64).unwrap().value;
        lattice += term;
        if term < 1e-18 {
            break;
        }
    }
    let f = 1.0 + ((0.5 * kappa).ln() + EULER_GAMMA) / TAU - 2.0 * lattice / TAU;
    assert!(f.abs() < 1e-9, "lattice residual {f:e}");
    assert!(dir.path().join("poly.manifest.json").exists());
}

#[test]
fn validate_accepts_a_ring_config() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ring.json", r#"{"experiment":"ring","radius":10,"gamma":0.5,"resolution":{"count":100}}"#);
    let out = lgq(dir.path(), &["validate", &f]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn negative_gamma_is_a_config_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "neg.json", r#"{"experiment":"ring","radius":10,"gamma":-0.5,"resolution":{"count":100}}"#);
    let out = lgq(dir.path(), &["validate", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gamma"));
    let out = lgq(dir.path(), &["ring", "--radius", "10", "--count", "50", "--gamma=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("gamma"));
}

#[test]
fn closed_star_angles_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "star.json",
        r#"{"experiment":"star-sweep","geometry":{"type":"star","angles":[4,3],"arm_lengths":[1,1,1]},
            "parameter":"arm_length","values":[1],"gamma":1,"resolution":{"spacing":0.1}}"#,
    );
    let out = lgq(dir.path(), &["validate", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("β_N"), "{}", stderr(&out));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{\"experiment\":");
    let unknown = write(
        dir.path(),
        "unknown.json",
        r#"{"experiment":"ring","radius":10,"gamma":0.5,"resolution":{"count":100},"colour":1}"#,
    );
    for f in [&broken, &unknown, &"missing.json".to_owned()] {
        assert_eq!(lgq(dir.path(), &["validate", f]).status.code(), Some(2), "{f}");
    }
    assert_eq!(lgq(dir.path(), &["presets", "no-such-figure"]).status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = lgq(
        dir.path(),
        &["eigenfunction", "--geometry", r#"{"type":"ring","radius":10}"#, "--gamma", "0.5", "--count", "50", "--state", "40"],
    );
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn manifest_reruns_to_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["star-sweep", "--angles", "pi/2", "--arm-lengths", "4,4", "--parameter", "beta"];
    let out = lgq(dir.path(), &[&args[..], &["--values", "1:2.5:4", "--gamma", "1", "--spacing", "0.25", "--output", "a"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = lgq(dir.path(), &["run", "a.manifest.json", "--output", "b"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let header = String::from_utf8(a).unwrap();
    assert!(header.starts_with("param,E_1"));
    assert_eq!(header.lines().count(), 5);
}

#[test]
fn presets_print_valid_configs() {
    let dir = tempfile::tempdir().unwrap();
    let list = lgq(dir.path(), &["presets"]);
    assert_eq!(list.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&list.stdout).contains("fig1 "));
    let out = lgq(dir.path(), &["presets", "fig17"]);
    let f = write(dir.path(), "fig17.json", &String::from_utf8(out.stdout).unwrap());
    assert_eq!(lgq(dir.path(), &["validate", &f]).status.code(), Some(0));
}
