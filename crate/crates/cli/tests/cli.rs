use std::fs;
use std::process::{Command, Output};

fn nanofiber(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanofiber"))
        .args(args)
        .output()
        .expect("binary runs")
}

const THIN: [&str; 6] = ["--radius-um", "0.2", "--wavelength-um", "1.3", "--n1", "1.4469"];

fn with_thin<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(THIN.iter()).chain(tail).copied().collect()
}

#[test]
fn solve_json_reports_reference_root() {
    let out = nanofiber(&with_thin(&["solve"], &["--n2", "1.0", "--json"]));
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let beta_a = value["solution"]["beta_a"].as_f64().unwrap();
    assert!((beta_a - 0.9702).abs() <= 5e-4);
    assert_eq!(value["solution"]["single_mode"], true);
    assert_eq!(value["solution"]["trap_condition"], true);
    assert_eq!(value["spec"]["n1"], 1.4469);
}

#[test]
fn solve_text_output() {
    let out = nanofiber(&with_thin(&["solve"], &[]));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("trap_condition (qa < 0.93)"));
    assert!(text.lines().any(|l| l.starts_with("beta_a") && l.contains("0.970")));
}

#[test]
fn invalid_indices_exit_2() {
    let out = nanofiber(&[
        "solve",
        "--radius-um",
        "0.2",
        "--wavelength-um",
        "1.3",
        "--n1",
        "1.4",
        "--n2",
        "1.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n1 > n2"));
}

#[test]
fn unknown_flag_exit_2_with_usage() {
    let out = nanofiber(&["solve", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn solver_failure_exit_3() {
    // V ≈ 0.03: the evanescent decay is too slow to resolve.
    let out = nanofiber(&["solve", "--radius-um", "0.02", "--wavelength-um", "1.3", "--n1", "1.05"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn validation_failure_exit_2() {
    let out = nanofiber(&with_thin(
        &["map"],
        &["--polarization", "rotating", "--columns", "theta"],
    ));
    assert_eq!(out.status.code(), Some(2));
    let out = nanofiber(&with_thin(&["radial"], &["--count", "1"]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failure_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing/dir/out.csv");
    let out = nanofiber(&with_thin(&["radial"], &["--out", path.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn radial_csv_to_stdout() {
    let out = nanofiber(&with_thin(
        &["radial"],
        &["--count", "3", "--r-max", "2", "--direction", "x", "--direction", "y"],
    ));
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        data[0],
        "r_over_a,intensity@x,intensity_lp01@x,intensity@y,intensity_lp01@y"
    );
    assert_eq!(data.len(), 4);
}

#[test]
fn map_json_file_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.json");
    let out = nanofiber(&with_thin(
        &["map"],
        &[
            "--resolution",
            "16",
            "--columns",
            "intensity,ez2",
            "--out",
            path.to_str().unwrap(),
        ],
    ));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let value: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(value["columns"]["ez2"].as_array().unwrap().len(), 256);
    assert_eq!(value["axes"]["x_over_a"].as_array().unwrap().len(), 16);
}

#[test]
fn azimuthal_rotating_sequential() {
    let out = nanofiber(&with_thin(
        &["--sequential", "azimuthal"],
        &[
            "--polarization",
            "rotating",
            "--sense",
            "counterclockwise",
            "--radius",
            "1.5",
            "--count",
            "8",
            "--columns",
            "intensity,epsilon",
        ],
    ));
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 8);
    let intensities: Vec<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert!(intensities.iter().all(|v| *v == intensities[0]));
}

#[test]
fn figures_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = nanofiber(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 11);
    assert_eq!(names[0], "fig01_weakly_guiding_x_profile.csv");
    assert!(names.iter().all(|n| n.ends_with(".csv")));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for path in &paths {
        let out = nanofiber(&with_thin(
            &["map"],
            &["--resolution", "32", "--out", path.to_str().unwrap()],
        ));
        assert!(out.status.success());
    }
    assert_eq!(fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
}
