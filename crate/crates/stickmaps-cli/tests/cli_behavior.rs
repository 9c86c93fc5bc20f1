//! Exit codes and input handling of the command-line tool.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_stickmaps"))
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = bin()
        .args(["verify", "--gen", "hextrefoil", "--graph", "tbridge"])
        .args(["--seed", "1", "--pairs", "400", "--probes", "80"])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn negative_control_fails_with_exit_one() {
    let out = bin()
        .args(["verify", "--gen", "hextrefoil", "--graph", "bridge"])
        .args([
            "--seed",
            "1",
            "--pairs",
            "400",
            "--probes",
            "80",
            "--negative-control",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_knot_file_is_input_error() {
    let out = bin()
        .args(["map", "--knot", "/nonexistent/knot.json", "--map", "bridge"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_knot_file_is_input_error() {
    let dir = std::env::temp_dir().join(format!("stickmaps-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("planar.json");
    std::fs::write(&path, r#"{"vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,0]]}"#).unwrap();
    let out = bin()
        .args(["map", "--knot"])
        .arg(&path)
        .args(["--map", "bridge"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zero_samples_is_usage_error() {
    let out = bin()
        .args([
            "crofton",
            "--gen",
            "hextrefoil",
            "--indicatrix",
            "tantrix",
            "--samples",
            "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_torus_output_validates_into_map_run() {
    let dir = std::env::temp_dir().join(format!("stickmaps-cli-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.json");
    let out = bin()
        .args(["gen", "--gen", "torus:2,3,60,2,1"])
        .arg("--out")
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["map", "--knot"])
        .arg(&path)
        .args(["--map", "bridge", "--samples", "100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["disagreements"], 0);
    assert!(report["input_hash"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn indicatrix_binotrix_of_quadrilateral_file_has_four_vertices() {
    let dir = std::env::temp_dir().join(format!("stickmaps-cli-q-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    std::fs::write(&path, r#"{"vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,1]]}"#).unwrap();
    let out = bin()
        .args(["indicatrix", "--knot"])
        .arg(&path)
        .args(["--which", "binotrix"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(
        report["result"]["polygon"]["vertices"]
            .as_array()
            .unwrap()
            .len(),
        4
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn indicatrix_tantrix_of_torus_trefoil_exceeds_4pi() {
    let out = bin()
        .args([
            "indicatrix",
            "--gen",
            "torus:2,3,60,2,1",
            "--which",
            "tantrix",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let length = report["result"]["total_length"].as_f64().unwrap();
    assert!(length > 4.0 * std::f64::consts::PI);
}

#[test]
fn degeneracy_budget_exceeded_is_exit_three() {
    // The single-point Fibonacci lattice is exactly (1, 0, 0), and the
    // quadrilateral fixture has an edge along (0, 1, 0), so the one sampled
    // direction is plateau-degenerate for the bridge map: 100% > 5%.
    let dir = std::env::temp_dir().join(format!("stickmaps-cli-degen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    std::fs::write(&path, r#"{"vertices": [[0,0,0],[1,0,0],[1,1,0],[0,1,1]]}"#).unwrap();
    let out = bin()
        .args(["map", "--knot"])
        .arg(&path)
        .args([
            "--map",
            "bridge",
            "--samples",
            "1",
            "--sampler",
            "fibonacci",
        ])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn indicatrix_darboux_reports_n_pi() {
    let out = bin()
        .args(["indicatrix", "--gen", "hextrefoil", "--which", "darboux"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let length = report["result"]["total_length"].as_f64().unwrap();
    assert!((length - 6.0 * std::f64::consts::PI).abs() < 1e-9);
    let polygon = &report["result"]["polygon"];
    assert_eq!(polygon["vertices"].as_array().unwrap().len(), 12);
    assert!(polygon["co_orientation"].is_string());
}
