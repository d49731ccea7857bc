use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn ribbon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(dir: &Path, stem: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.report.json"))).unwrap()).unwrap()
}

#[test]
fn geometry_writes_helix_obj() {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join("fig2a.toml");
    let o = ribbon(&["geometry", "--config", path_str(&cfg), "--out", path_str(out.path()), "--format", "obj"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let obj = fs::read_to_string(out.path().join("fig2a.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 200 * 20);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 199 * 19);
    let r = report(out.path(), "fig2a");
    assert_eq!(r["classification"]["class"], "cylindrical_helix");
    assert_eq!(r["descriptors"]["chirality"], 1);
    assert!(r["passed"].as_bool().unwrap());
    assert!(r["residuals"]["frame_orthogonality"].as_f64().unwrap() < 1e-12);
}

#[test]
fn isotropic_laminate_is_a_ring_at_every_cut() {
    let dir = tempfile::tempdir().unwrap();
    let base = fs::read_to_string(configs().join("ring_laminate.toml")).unwrap();
    let mut radii = Vec::new();
    for k in 0..7 {
        let cut = (15.0 * k as f64).to_radians();
        let doc = base.replace("cut_angle = 0.5235987755982988", &format!("cut_angle = {cut:?}"));
        let cfg = dir.path().join(format!("ring{k}.toml"));
        fs::write(&cfg, doc).unwrap();
        let o = ribbon(&["solve", "--config", path_str(&cfg), "--out", path_str(dir.path()), "--quiet"]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
        let r = report(dir.path(), &format!("ring{k}"));
        assert_eq!(r["classification"]["class"], "ring");
        assert_eq!(r["route"], "numeric");
        assert_eq!(r["config"]["mechanics"]["cut_angle"].as_f64().unwrap(), cut);
        radii.push(r["descriptors"]["radius"].as_f64().unwrap());
    }
    let (lo, hi) = radii.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    assert!((hi - lo) / hi < 1e-8, "{radii:?}");
}

#[test]
fn verify_passes_on_seeded_corpus() {
    let o = ribbon(&["verify", "--tol", "1e-8", "--seed", "7", "--cases", "200"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("ok")));
}

#[test]
fn verify_failure_names_the_invariant() {
    let o = ribbon(&["verify", "--tol", "1e-30", "--cases", "10", "--quiet"]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("identity/alpha^2-beta^2-tau^2"), "{err}");
    assert!(err.contains("ode/closed_form_vs_rk4"));
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "units = \"SI\"\nmode = \"geometric\"\n[geometry]\nkappa1 = 1.0\nkappa2 = 0.0\nphi = 0.0\nkappa3 = 2.0\n").unwrap();
    let o = ribbon(&["geometry", "--config", path_str(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa3"));

    let conflict = dir.path().join("conflict.toml");
    fs::write(
        &conflict,
        "units = \"SI\"\nmode = \"geometric\"\n[geometry]\nkappa1 = 1.0\nkappa2 = 0.0\nphi = 0.0\n[mechanics]\nthickness = 1e-3\n",
    )
    .unwrap();
    assert_eq!(code(&ribbon(&["geometry", "--config", path_str(&conflict)])), 2);

    // wrong subcommand for the mode
    let cfg = configs().join("fig2a.toml");
    assert_eq!(code(&ribbon(&["solve", "--config", path_str(&cfg)])), 2);
    assert_eq!(code(&ribbon(&["geometry"])), 2);
    assert_eq!(code(&ribbon(&["geometry", "--samples", "3"])), 2);
}

#[test]
fn io_errors_exit_1() {
    let o = ribbon(&["geometry", "--config", "/nonexistent/job.toml"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/job.toml"));

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = configs().join("fig2a.toml");
    let o = ribbon(&["geometry", "--config", path_str(&cfg), "--out", path_str(&blocker.join("sub"))]);
    assert_eq!(code(&o), 1);
}

#[test]
fn residual_failure_exits_3_but_still_reports() {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join("single_surface.toml");
    let o = ribbon(&["solve", "--config", path_str(&cfg), "--out", path_str(out.path()), "--tol", "1e-300"]);
    assert_eq!(code(&o), 3);
    let r = report(out.path(), "single_surface");
    assert!(!r["passed"].as_bool().unwrap());
    assert!(!r["failures"].as_array().unwrap().is_empty());
}

#[test]
fn classify_prints_the_class() {
    let cfg = configs().join("twist_laminate.toml");
    let o = ribbon(&["classify", "--config", path_str(&cfg)]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "purely_twisted\n");
}

#[test]
fn mesh_defaults_to_obj_and_honours_samples() {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join("helix_laminate.toml");
    let o = ribbon(&["mesh", "--config", path_str(&cfg), "--out", path_str(out.path()), "--samples", "30x4", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let obj = fs::read_to_string(out.path().join("helix_laminate.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 120);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2 * 29 * 3);
}

#[test]
fn sweep_streams_csv_and_boundary() {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join("sweep_kappa2.toml");
    let o = ribbon(&["sweep", "--config", path_str(&cfg), "--out", path_str(out.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.path().join("sweep_kappa2.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "i_kappa2");
    assert_eq!(&headers[1], "kappa2");
    let class_col = headers.iter().position(|h| h == "class").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 21);
    assert_eq!(&rows[0][class_col], "purely_twisted");
    assert_eq!(&rows[10][class_col], "cylindrical_helix");
    assert_eq!(&rows[20][class_col], "ring");
    let b: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("sweep_kappa2.boundary.json")).unwrap()).unwrap();
    let root = b["roots"][0].as_f64().unwrap();
    assert!((root + 1.0).abs() < 1e-9);
}
