use std::path::Path;
use std::process::Command;

use rr_collapse::cli::{format_trace, parse_trace, read_trace};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rr-collapse"));
    c.env_remove("RR_COLLAPSE_OUT");
    c
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn version_and_listing() {
    let out = bin().arg("version").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), format!("rr-collapse {}", env!("CARGO_PKG_VERSION")));

    let out = bin().arg("list-experiments").output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.contains("two_well_localization"));
}

#[test]
fn run_writes_artifacts_and_flags_override_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"experiment":"fermi_decay","parameters":{"A":1.0}}"#);
    let out_dir = tmp.path().join("out");
    let status = bin()
        .args(["run", cfg.to_str().unwrap(), "--set", "A=2.0", "--set", "seed=5", "--out", out_dir.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config_echo"]["parameters"]["A"], 2.0);
    assert_eq!(manifest["config_echo"]["parameters"]["p2_initial"], 0.99);
    assert_eq!(manifest["config_echo"]["seed"], 5);
    assert_eq!(manifest["artifact_version"], env!("CARGO_PKG_VERSION"));
    assert!(manifest["started"].as_str().unwrap() <= manifest["finished"].as_str().unwrap());
    let files = manifest["files"].as_array().unwrap();
    assert!(!files.is_empty());
    for f in files {
        assert!(out_dir.join(f.as_str().unwrap()).exists(), "{f}");
    }
    assert!(out_dir.join("plot.gp").exists());
    assert!(out_dir.join("plot_p2_ode.dat").exists());

    let text = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(text.starts_with("t,p2_closed,p2_ode,p1_ode,abs_error\n"));
    let trace = read_trace(&out_dir.join("trace.csv")).unwrap();
    assert_eq!(format_trace(&trace), text);
    assert_eq!(parse_trace(&text).unwrap(), trace);
}

#[test]
fn repeated_runs_are_bit_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"experiment":"three_level_cascade","seed":3,"sample_interval":7}"#);
    let mut csv = Vec::new();
    for run in ["a", "b"] {
        let dir = tmp.path().join(run);
        assert!(bin().args(["run", cfg.to_str().unwrap(), "--out", dir.to_str().unwrap()]).output().unwrap().status.success());
        csv.push(std::fs::read(dir.join("trace.csv")).unwrap());
    }
    assert_eq!(csv[0], csv[1]);
}

#[test]
fn environment_sets_default_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", r#"{"experiment":"runaway_demo"}"#);
    let env_dir = tmp.path().join("from-env");
    let status = bin().env("RR_COLLAPSE_OUT", &env_dir).args(["run", cfg.to_str().unwrap()]).output().unwrap().status;
    assert!(status.success());
    assert!(env_dir.join("trace.csv").exists());
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"experiment":"bogus"}"#, "fermi_decay"),
        ("{\"experiment\": \"fermi_decay\",\n oops}", ":2:"),
        (r#"{"experiment":"fermi_decay","params":{}}"#, "unknown field"),
        (r#"{"experiment":"fermi_decay","parameters":{"B":1}}"#, "unknown parameter"),
        (r#"{"experiment":"fermi_decay","parameters":{"p2_initial":2}}"#, "p2_initial"),
    ];
    for (i, (body, needle)) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("c{i}.json"), body);
        let out = bin()
            .args(["run", cfg.to_str().unwrap(), "--out", tmp.path().join(format!("o{i}")).to_str().unwrap()])
            .output()
            .unwrap();
        assert!(!out.status.success(), "{body}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        assert!(err.contains(needle), "{err}");
    }
    let out = bin().args(["run", "/nonexistent/c.json"]).output().unwrap();
    assert!(!out.status.success());
}
