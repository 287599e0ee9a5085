//! Configuration, snapshots and batch runs on small grids.

use srhd_core::io::{self, read_fields, write_fields, Category, RunConfig, RunError, SnapshotMeta};
use srhd_core::presets::preset;

fn config(dir: &std::path::Path, extra: &str) -> RunConfig {
    let text = format!("output_dir = {:?}\n{extra}", dir.to_str().unwrap());
    io::parse_config(&text).unwrap()
}

#[test]
fn run_writes_snapshots_and_a_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "problem = \"rp1d\"\nresolution = [64]\nt_final = 0.05\noutput_every = 5");
    let summary = io::run(&cfg).unwrap();
    assert_eq!(summary.n, [64, 1]);
    assert_eq!(summary.time, 0.05);
    assert!(summary.outputs.len() >= 2);
    assert!(summary.min_d > 0.0 && summary.min_q > 0.0);

    let last = summary.outputs.last().unwrap();
    assert!(last.ends_with("rp1d_final.csv"));
    let fields = read_fields::<1>(last).unwrap();
    assert_eq!(fields.len(), 64);
    assert!(fields.iter().all(|u| u.is_admissible()));

    let meta: SnapshotMeta = serde_json::from_str(&std::fs::read_to_string(last.with_extension("json")).unwrap()).unwrap();
    assert_eq!((meta.problem.as_str(), meta.step, meta.time), ("rp1d", summary.steps, 0.05));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["problem"], "rp1d");
    assert_eq!(manifest["summary"]["steps"], summary.steps);
}

#[test]
fn rerunning_the_same_config_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "problem = \"rp2d_1\"\nresolution = [16]\nt_final = 0.02");
    let a = io::run(&cfg).unwrap();
    let fa = read_fields::<2>(a.outputs.last().unwrap()).unwrap();
    let b = io::run(&cfg).unwrap();
    let fb = read_fields::<2>(b.outputs.last().unwrap()).unwrap();
    assert_eq!(fa, fb);
    assert_eq!(a.steps, b.steps);
}

#[test]
fn convergence_table_is_written_and_orders_are_high() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = config(tmp.path(), "resolutions = [16, 32, 64]");
    let table = io::convergence(&cfg).unwrap();
    assert_eq!(table.rows.len(), 3);
    assert!(table.l1_orders().iter().all(|&o| o > 4.0), "{table}");
    let txt = std::fs::read_to_string(tmp.path().join("convergence.txt")).unwrap();
    assert!(txt.lines().count() == 4 && txt.contains("l1 order"));
    assert!(tmp.path().join("convergence.json").exists());
}

#[test]
fn convergence_needs_the_smooth_problem() {
    let tmp = tempfile::tempdir().unwrap();
    let e = io::convergence(&config(tmp.path(), "problem = \"blast\"")).unwrap_err();
    assert_eq!(e.category(), Category::Config);
}

#[test]
fn property_suite_writes_its_report() {
    let tmp = tempfile::tempdir().unwrap();
    let report = io::properties(&config(tmp.path(), "samples = 200\nseed = 7")).unwrap();
    assert!(report.passed());
    assert!(tmp.path().join("properties.txt").exists());
}

#[test]
fn bad_configurations_name_the_key() {
    for (text, key) in [
        ("problem = \"nope\"", "problem"),
        ("w_hat = 1.5", "w_hat"),
        ("theta_amp = 0.5", "theta_amp"),
        ("resolution = [10, 10]", "resolution"),
        ("dt = 0.1\ndt_power = 2.0", "dt"),
        ("samples = 0", "samples"),
    ] {
        let e = io::parse_config(text).unwrap_err();
        assert_eq!(e.category(), Category::Config);
        assert!(e.to_string().contains(&format!("`{key}`")), "{text}: {e}");
    }
    assert_eq!(Category::Config.exit_code(), 2);
}

#[test]
fn unwritable_output_is_an_io_error() {
    let tmp = tempfile::tempdir().unwrap();
    let file = tmp.path().join("plain");
    std::fs::write(&file, "").unwrap();
    let e = io::run(&config(&file, "resolution = [8]\nt_final = 0.001")).unwrap_err();
    assert!(matches!(e, RunError::Io { .. }));
    assert_eq!(e.category().exit_code(), 4);
}

#[test]
fn field_files_round_trip_bit_exact() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = preset("rp2d_2").unwrap();
    let eos = spec.eos().unwrap();
    let mut g = spec.build_2d([12, 12], 3).unwrap();
    // perturb so every digit matters
    for u in g.data_mut() {
        u.e *= 1.0 + 1e-15 * std::f64::consts::PI;
    }
    let meta = SnapshotMeta {
        problem: "rp2d_2".into(),
        dim: 2,
        n: g.n,
        spacing: g.spacing,
        origin: g.origin,
        axisymmetric: false,
        time: 0.0,
        step: 0,
        gamma: spec.gamma,
        r: 3,
        w_hat: 0.45,
        theta_amp: 1.2,
        eps_d: 1e-13,
        eps_q: 1e-13,
        limiter: true,
        characteristic: true,
    };
    let path = tmp.path().join("f.csv");
    write_fields(&g, &eos, &path, &meta, true).unwrap();
    assert_eq!(read_fields::<2>(&path).unwrap(), g.interior());
    let head = std::fs::read_to_string(&path).unwrap();
    assert!(head.starts_with("x,y,rho,v1,v2,p,"));
    assert!(head.lines().next().unwrap().ends_with("ln_rho"));
}
