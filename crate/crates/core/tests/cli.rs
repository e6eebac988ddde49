//! End-to-end checks of the `vpsplit` binary: artifacts, exit codes and
//! byte-stable output.

use std::path::Path;
use std::process::{Command, Output};

use vpsplit::cli_io::{load_snapshot, RunConfig};
use vpsplit::{l1_distance, landau_initial_condition};

fn vpsplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vpsplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn default_run_writes_sixteen_rows_and_one_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let out_dir = dir.path().join("out");
    let out = vpsplit(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = std::fs::read_to_string(out_dir.join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "step,t,mass,l1_norm,electric_energy,boundary_mass");
    assert_eq!(lines.len(), 17);
    assert!(lines[16].starts_with("16,1.0000000000000000e0,"));

    let snapshots: Vec<_> = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "snap"))
        .collect();
    assert_eq!(snapshots.len(), 1);
}

#[test]
fn equilibrium_run_returns_initial_state() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"init.alpha": 0.0}"#);
    let out_dir = dir.path().join("out");
    let out = vpsplit(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let last = load_snapshot(&out_dir.join("final.snap")).unwrap();
    let initial = landau_initial_condition(*last.field.spec(), 0.0).unwrap();
    assert!(l1_distance(&last.field, &initial).unwrap() <= 1e-12);
}

#[test]
fn non_integer_step_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"scheme.tau": 0.3}"#);
    let out = vpsplit(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("configuration error"));
}

#[test]
fn missing_or_malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("o");
    let out = vpsplit(&["run", "--config", "/nonexistent/c.json", "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let cfg = write_config(dir.path(), "c.json", r#"{"grid.nx": 80,"#);
    let out = vpsplit(&["run", "--config", &cfg, "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mass_escaping_the_velocity_window_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"grid.vmax": 5.5, "grid.nx": 16, "grid.nv": 32, "init.alpha": 1.0,
            "scheme.tau": 0.5, "scheme.t_end": 40}"#,
    );
    let out = vpsplit(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical failure at step"));
}

#[test]
fn verify_passes_and_forced_phi_failure_exits_1() {
    let out = vpsplit(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    for suite in ["[phi]", "[groebner-alekseev]", "[field-oracle]", "[interpolation]"] {
        assert!(text.contains(suite), "{suite} missing");
    }
    assert!(!text.contains("FAIL"));

    let out = vpsplit(&["verify", "--phi-threshold", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL [phi]"));
    assert!(text.contains("failed suites: phi"));
}

#[test]
fn snapshot_info_reads_headers_and_rejects_garbage() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"grid.nx": 16, "grid.nv": 24, "scheme.tau": 0.5}"#,
    );
    let out_dir = dir.path().join("out");
    assert_eq!(
        vpsplit(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let snap = out_dir.join("final.snap");
    let out = vpsplit(&["snapshot-info", snap.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("nx      16"));
    assert!(text.contains("nv      24"));
    assert!(text.contains("time    1.00000000000000000e0"));

    let bad = dir.path().join("bad.snap");
    std::fs::write(&bad, b"NOTASNAPSHOT-AT-ALL").unwrap();
    let out = vpsplit(&["snapshot-info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("format error"));
}

#[test]
fn convergence_outputs_are_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"grid.nx": 24, "grid.nv": 32, "init.alpha": 0.05}"#,
    );
    let cache = dir.path().join("cache");
    let run = |name: &str| {
        let out_dir = dir.path().join(name);
        let out = vpsplit(&[
            "convergence",
            "--config",
            &cfg,
            "--taus",
            "1/4,1/8,1/16",
            "--tau-ref",
            "1/64",
            "--method",
            "both",
            "--out",
            out_dir.to_str().unwrap(),
            "--cache-dir",
            cache.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        (out_dir, stdout(&out))
    };
    let (first, text1) = run("a");
    let (second, text2) = run("b");
    assert!(!text1.contains("cached reference"));
    assert!(text2.contains("cached reference"));
    for file in [
        "convergence_strang.csv",
        "convergence_lie.csv",
        "convergence_summary.csv",
    ] {
        let a = std::fs::read(first.join(file)).unwrap();
        let b = std::fs::read(second.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between runs");
    }
    let table = std::fs::read_to_string(first.join("convergence_strang.csv")).unwrap();
    for line in table.lines().skip(1) {
        let error: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(error.is_finite() && error > 0.0);
    }
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
}

#[test]
fn convergence_rejects_reference_too_coarse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", "{}");
    let out = vpsplit(&[
        "convergence",
        "--config",
        &cfg,
        "--taus",
        "1/8,1/16",
        "--tau-ref",
        "1/32",
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_documents_round_trip_through_the_library() {
    let cfg = RunConfig::default();
    assert_eq!(RunConfig::from_json(&cfg.to_json()).unwrap(), cfg);
}

#[test]
fn output_dir_from_config_is_used_when_out_is_omitted() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-config");
    let json = format!(
        r#"{{"grid.nx": 16, "grid.nv": 24, "scheme.tau": 0.5, "output.dir": {:?}}}"#,
        target.to_str().unwrap()
    );
    let cfg = write_config(dir.path(), "c.json", &json);
    let out = vpsplit(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(target.join("final.snap").exists());

    let cfg = write_config(dir.path(), "bare.json", r#"{"grid.nx": 16, "grid.nv": 24}"#);
    assert_eq!(vpsplit(&["run", "--config", &cfg]).status.code(), Some(2));
}
