use std::process::{Command, Output};

fn srhd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srhd"))
        .args(args)
        .env("SRHD_THREADS", "2")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lists_every_problem() {
    let o = srhd(&["list-problems"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 9);
    for name in ["smooth", "rp1d", "blast", "shock_heating", "rp2d_1", "rp2d_2", "ffstep", "jet_a1", "jet_c2"] {
        assert!(out.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn small_run_writes_output() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().to_str().unwrap();
    let o = srhd(&["run", "--problem", "rp1d", "--resolution", "50", "--t-final", "0.05", "-o", dir]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("problem rp1d on 50x1 cells"));
    assert!(tmp.path().join("rp1d_final.csv").exists());
    assert!(tmp.path().join("manifest.json").exists());
}

#[test]
fn flags_override_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    std::fs::write(&cfg, "problem = \"blast\"\nresolution = [40]\nt_final = 0.01\n").unwrap();
    let dir = tmp.path().join("out");
    let o = srhd(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--problem",
        "rp1d",
        "-o",
        dir.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(dir.join("rp1d_final.csv").exists());
    // resolution comes from the file, the problem from the flag
    assert!(stdout(&o).contains("problem rp1d on 40x1 cells"), "{}", stdout(&o));
}

#[test]
fn configuration_errors_exit_with_2() {
    let o = srhd(&["run", "-r", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`r`"), "{}", stderr(&o));

    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, "problem = \"smooth\"\ncolour = 3\n").unwrap();
    let o = srhd(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));

    let o = srhd(&["convergence", "--problem", "blast"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_file_exits_with_4() {
    let o = srhd(&["run", "--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn convergence_prints_a_table() {
    let tmp = tempfile::tempdir().unwrap();
    let o = srhd(&["convergence", "--resolutions", "16,32", "-o", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("l1 order"));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn properties_pass_and_report() {
    let tmp = tempfile::tempdir().unwrap();
    let o = srhd(&["properties", "--samples", "300", "-o", tmp.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(tmp.path().join("properties.txt").exists());
}

#[test]
fn bad_thread_count_is_a_configuration_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_srhd"))
        .arg("list-problems")
        .env("SRHD_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
