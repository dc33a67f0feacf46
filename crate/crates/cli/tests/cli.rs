use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn dgame(args: &[&str], output_root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgame"))
        .args(args)
        .env("DGAME_OUTPUT_ROOT", output_root)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_then_fit_the_written_curve() {
    let root = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenarios().join("ogd-pair.toml"))
        .unwrap()
        .replace("horizon = 10000", "horizon = 400");
    let config = dir.path().join("small.toml");
    fs::write(&config, text).unwrap();

    let out = dgame(&["run", config.to_str().unwrap()], root.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let curve = root.path().join("ogd-pair").join("curve.csv");
    assert!(curve.exists(), "{}", stdout(&out));
    assert!(root.path().join("ogd-pair").join("summary.json").exists());

    let out = dgame(&["rates", curve.to_str().unwrap()], root.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("selected"), "{}", stdout(&out));

    let seed_csv = fs::read_dir(root.path().join("ogd-pair"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.file_name().unwrap().to_str().unwrap().starts_with("seed-"))
        .unwrap();
    let out = dgame(
        &["rates", seed_csv.to_str().unwrap(), "--config", config.to_str().unwrap()],
        root.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = dgame(&["rates", seed_csv.to_str().unwrap()], root.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_config_exits_with_two() {
    let root = tempfile::tempdir().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenarios().join("interpolation-pair.toml"))
        .unwrap()
        .replace("horizon = 10000", "horizon = 0");
    let config = dir.path().join("bad.toml");
    fs::write(&config, text).unwrap();
    let out = dgame(&["run", config.to_str().unwrap()], root.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("horizon"));

    let out = dgame(&["check", "does-not-exist.toml"], root.path());
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn check_and_gconst_on_shipped_scenario() {
    let root = tempfile::tempdir().unwrap();
    let config = scenarios().join("interpolation-pair.toml");
    let out = dgame(&["check", config.to_str().unwrap()], root.path());
    assert!(out.status.success(), "{}", stdout(&out));
    let out = dgame(&["gconst", config.to_str().unwrap()], root.path());
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lower_const") && text.contains("0.125"), "{text}");
}

#[test]
fn stableset_reports_an_interval() {
    let root = tempfile::tempdir().unwrap();
    let graph = scenarios().join("petersen.graph");
    let out = dgame(&["stableset", graph.to_str().unwrap(), "--T", "200"], root.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("gamma"), "{text}");
}
