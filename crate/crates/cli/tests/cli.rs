//! End-to-end checks of the binary surface.

use std::process::Command;

fn gcn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gcn"))
}

#[test]
fn verify_golden_exits_zero() {
    let out = gcn()
        .args(["verify", "golden", "--n", "4", "--trials", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn rejects_small_sizes_with_pointer() {
    let out = gcn().args(["verify", "all", "--n", "3"]).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("special case"), "stderr: {err}");
}

#[test]
fn build_emits_all_quivers() {
    let dir = std::env::temp_dir().join("gcn-build-test");
    let _ = std::fs::remove_dir_all(&dir);
    let out = gcn()
        .args(["build", "--n", "4", "--format", "json", "--out"])
        .arg(&dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in [
        "dual-3.json",
        "hankel-3.json",
        "glued-4.json",
        "two-cycle-4.json",
        "subquiver-4.json",
        "boomerang-4.json",
    ] {
        let path = dir.join(name);
        assert!(path.exists(), "missing {name}");
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(parsed["vertices"].as_array().is_some_and(|v| !v.is_empty()));
    }
    // The two-cycle quiver records its opposite pair and its string.
    let text = std::fs::read_to_string(dir.join("two-cycle-4.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["opposite_pairs"].as_array().unwrap().len(), 1);
    assert!(!parsed["strings"].as_array().unwrap().is_empty());
}

#[test]
fn mutate_emits_validated_trace() {
    let out = gcn().args(["mutate", "W", "--n", "4"]).output().unwrap();
    assert!(out.status.success());
    let steps: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("stdout is the JSON trace");
    let steps = steps.as_array().unwrap();
    assert_eq!(steps.len(), 10);
    assert!(steps.iter().all(|s| s["ok"].as_bool() == Some(true)));
    assert_eq!(steps[0]["predicted"], "[1~ 3]");
}

#[test]
fn roundtrip_command_reports_exact_reconstructions() {
    let out = gcn()
        .args(["roundtrip", "--n", "4", "--trials", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("3/3"), "stdout: {stdout}");
}

#[test]
fn quiver_json_round_trips() {
    let n = 4;
    let x = gcn_cli::sample_matrix(n, 0);
    let seed = gcn_core::structures::glued_seed(n, &x);
    let j = gcn_cli::quiver_to_json(&seed.quiver, "glued-4", n, Some(&seed));
    let text = serde_json::to_string(&j).unwrap();
    let back: gcn_cli::QuiverJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.vertices.len(), j.vertices.len());
    assert_eq!(back.arrows.len(), j.arrows.len());
    assert_eq!(back.strings.len(), 1);
}
