//! End-to-end tests of the command-line surface: exit codes, CSV contracts,
//! config-file merging and byte-level reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn arnold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arnold"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("arnold-cli-test-{}-{name}", std::process::id()));
    p
}

fn last_data_row(text: &str) -> Vec<f64> {
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains(',') && !l.contains("v0,"))
        .collect();
    rows.last()
        .expect("data rows present")
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect()
}

#[test]
fn check_so3_reports_valid_unimodular_algebra() {
    let out = arnold(&["check", "so3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("jacobi_residual = 0.0000000000000000e0"));
    assert!(text.contains("unimodular = true"));

    let out = arnold(&["check", "halfplane"]);
    assert!(stdout(&out).contains("unimodular = false"));
}

#[test]
fn check_unknown_model_exits_2() {
    let out = arnold(&["check", "so4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind=config"));
}

#[test]
fn simulate_halfplane_matches_closed_form() {
    let out = arnold(&["simulate", "halfplane", "--v0", "0,1", "--T", "1", "--dt", "1e-3"]);
    assert!(out.status.success());
    let row = last_data_row(&stdout(&out));
    // t, v0, v1, E
    assert!((row[0] - 1.0).abs() < 1e-12);
    assert!((row[1] + 1.0f64.tanh()).abs() < 1e-8, "v0 = {}", row[1]);
    assert!((row[2] - 1.0 / 1.0f64.cosh()).abs() < 1e-8, "v1 = {}", row[2]);
    assert!((row[3] - 0.5).abs() < 1e-10);
}

#[test]
fn simulate_blowup_exits_3() {
    let out = arnold(&[
        "simulate",
        "halfplane",
        "--v0",
        "1e9,1e9",
        "--T",
        "10",
        "--dt",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kind=runtime"));
}

#[test]
fn curvature_cylinder_classification() {
    let out = arnold(&["curvature", "--cylinder", "r=1,h=1,m=1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("classification = unstable_in_plane"));

    let out = arnold(&["curvature", "--cylinder", "r=1,h=2,m=1"]);
    assert!(stdout(&out).contains("classification = stable_in_plane"));

    let out = arnold(&["curvature", "--metric", "1,1,1"]);
    let text = stdout(&out);
    assert!(text.contains("K12 = 2.5000000000000000e-1"));
}

#[test]
fn ensemble_is_byte_reproducible_and_thread_independent() {
    let args = |threads: &str, path: &str| {
        vec![
            "--threads".to_string(),
            threads.to_string(),
            "ensemble".to_string(),
            "so3".to_string(),
            "--samples".to_string(),
            "500".to_string(),
            "--burn-in".to_string(),
            "0.5".to_string(),
            "--thin".to_string(),
            "5".to_string(),
            "--chains".to_string(),
            "3".to_string(),
            "--seed".to_string(),
            "42".to_string(),
            "--out".to_string(),
            path.to_string(),
        ]
    };
    let p1 = temp_path("ens1.csv");
    let p2 = temp_path("ens2.csv");
    let o1 = Command::new(env!("CARGO_BIN_EXE_arnold"))
        .args(args("1", p1.to_str().unwrap()))
        .output()
        .unwrap();
    let o2 = Command::new(env!("CARGO_BIN_EXE_arnold"))
        .args(args("2", p2.to_str().unwrap()))
        .output()
        .unwrap();
    assert!(o1.status.success() && o2.status.success());
    let b1 = std::fs::read(&p1).unwrap();
    let b2 = std::fs::read(&p2).unwrap();
    assert_eq!(b1, b2, "ensemble output must not depend on --threads");
    assert_eq!(o1.stdout, o2.stdout, "summary must not depend on --threads");
    let _ = std::fs::remove_file(p1);
    let _ = std::fs::remove_file(p2);
}

#[test]
fn ensemble_refuses_halfplane_without_override() {
    let out = arnold(&["ensemble", "halfplane", "--samples", "10", "--burn-in", "0.01"]);
    assert_eq!(out.status.code(), Some(2));

    let out = arnold(&[
        "ensemble",
        "halfplane",
        "--samples",
        "10",
        "--burn-in",
        "0.01",
        "--allow-naive-measure",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("naive (measure ignored)"));
}

#[test]
fn model_file_blocks_supply_defaults() {
    let path = temp_path("halfplane.toml");
    std::fs::write(
        &path,
        r#"
name = "halfplane-file"
dim = 2
f = [[0, 1, 1, -1.0]]
G = [[1.0, 0.0], [0.0, 1.0]]
Gamma = [[0.0, 0.0], [0.0, 0.0]]
D = [[0.0, 0.0], [0.0, 0.0]]
measure = "halfplane"
domain = [[-4.0, 4.0], [0.05, 4.0]]

[simulate]
v0 = [0.0, 1.0]
T = 1.0
dt = 1e-3
"#,
    )
    .unwrap();
    let out = arnold(&["simulate", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let row = last_data_row(&stdout(&out));
    assert!((row[1] + 1.0f64.tanh()).abs() < 1e-8);
    let _ = std::fs::remove_file(path);
}

#[test]
fn model_file_rejects_unknown_keys() {
    let path = temp_path("bad.toml");
    std::fs::write(&path, "dim = 2\nwhatever = 3\n").unwrap();
    let out = arnold(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
}

#[test]
fn instanton_abelian_action() {
    // gamma = 1, D = 1/2 via a model file; Phi -> gamma v^2/(2D) = 1.
    let path = temp_path("ou.toml");
    std::fs::write(
        &path,
        "name = \"ou\"\ndim = 1\nG = [[1.0]]\nGamma = [[1.0]]\nD = [[0.5]]\n",
    )
    .unwrap();
    let out = arnold(&[
        "instanton",
        path.to_str().unwrap(),
        "--from",
        "0",
        "--to",
        "1",
        "--T",
        "20",
        "--dt",
        "1e-3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    let phi_line = err
        .lines()
        .find(|l| l.starts_with("Phi = "))
        .expect("Phi line in summary");
    let phi: f64 = phi_line.trim_start_matches("Phi = ").parse().unwrap();
    assert!((phi - 1.0).abs() < 1e-3, "Phi = {phi}");
    let _ = std::fs::remove_file(path);
}

#[test]
fn shipped_model_files_validate_and_drive_commands() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let halfplane = root.join("models/halfplane.toml");
    let rigid = root.join("models/rigid-body.toml");

    for model in [&halfplane, &rigid] {
        let out = arnold(&["check", model.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert!(stdout(&out).contains("valid = true"));
    }

    // The [instanton] block carries from/to/T: the boundary problem at
    // energy 4 with Einstein-matched tensors gives Phi close to beta E = 8.
    let out = arnold(&["instanton", halfplane.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    let phi: f64 = err
        .lines()
        .find(|l| l.starts_with("Phi = "))
        .expect("Phi line")
        .trim_start_matches("Phi = ")
        .parse()
        .unwrap();
    assert!((phi - 8.0).abs() / 8.0 < 0.05, "Phi = {phi}");
}

#[test]
fn instanton_nonconvergence_exits_3() {
    let out = arnold(&[
        "instanton",
        "halfplane",
        "--from",
        "0,0.5",
        "--to",
        "0,300",
        "--T",
        "0.2",
        "--dt",
        "1e-2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fpk_small_run_and_restart() {
    let field = temp_path("field.csv");
    let out = arnold(&[
        "fpk",
        "halfplane",
        "--grid",
        "-2:2:16,0.1:2:16",
        "--beta",
        "1",
        "--gamma",
        "1",
        "--T",
        "0.5",
        "--out",
        field.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mass_line = text.lines().find(|l| l.starts_with("mass = ")).unwrap();
    let mass: f64 = mass_line.trim_start_matches("mass = ").parse().unwrap();
    assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");

    // Restart from the written field: exit 0 and conserve mass again.
    let out = arnold(&[
        "fpk",
        "halfplane",
        "--grid",
        "-2:2:16,0.1:2:16",
        "--beta",
        "1",
        "--gamma",
        "1",
        "--T",
        "0.25",
        "--init",
        field.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let _ = std::fs::remove_file(field);
}

#[test]
fn fpk_requires_time_or_report() {
    let out = arnold(&["fpk", "halfplane", "--beta", "1", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(2));
}
