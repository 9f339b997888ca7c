//! End-to-end checks of the command-line binary: output determinism, exit
//! codes, and config-file handling.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gendicke"))
}

#[test]
fn dos_output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let status = bin()
            .args(["dos", "--gamma", "1.0", "--xi", "1", "--epsilon", "-2.5:1.5:9"])
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    }
    let (a, b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("epsilon,nu_scaled,domain,quadrature_error\n"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "gamma = 0.2\nxi = 1.0\nj = 5.0\ngs_only = true\n").unwrap();
    let out = dir.path().join("gs.csv");
    let status = bin()
        .args(["spectrum", "--gamma", "1.0"])
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    let gs: f64 = text.lines().nth(1).unwrap().split(',').nth(3).unwrap().parse().unwrap();
    // gamma = 1 (flag) gives a superradiant ground state well below the
    // normal-phase value that gamma = 0.2 (file) would produce.
    assert!(gs < -1.5, "flag override not applied: gs = {gs}");
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "not_a_key = 1\n").unwrap();
    let status = bin()
        .args(["fixed-points", "--out", "/dev/null"])
        .arg("--config")
        .arg(&cfg)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bin()
        .args(["dos", "--epsilon", "1:2", "--out", "/dev/null"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    let status = bin().args(["trajectory", "--jz", "1.5", "--out", "/dev/null"]).status().unwrap();
    assert_eq!(status.code(), Some(3));
}

#[test]
fn validate_passes_and_fault_injection_fails() {
    let out = bin().args(["validate", "--samples", "20000"]).output().unwrap();
    assert!(out.status.success(), "validate failed: {}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("PASS ").count(), 7);
    assert!(text.contains("OK (7/7 suites passed"));

    let out = bin()
        .args(["validate", "--samples", "20000", "--inject-fault", "critical-coupling"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL critical-couplings"));
}
