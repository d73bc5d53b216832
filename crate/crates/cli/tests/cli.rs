//! End-to-end tests of the command-line surface and its exit-code contract.

use std::path::Path;
use std::process::{Command, Output};

fn mwis(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwis"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, content: &str) {
    std::fs::write(dir.join(name), content).unwrap();
}

const P5: &str = "p 5 4\nn 0 4\nn 1 9\nn 2 6\nn 3 2\nn 4 8\ne 0 1\ne 1 2\ne 2 3\ne 3 4\n";

#[test]
fn solve_exact_with_oracle_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p5.gr", P5);
    let out = mwis(
        &["solve", "--graph", "p5.gr", "--class", "pt:6", "--mode", "exact", "--oracle"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["weight"], 18);
    assert_eq!(report["verification"][0]["name"], "oracle_match");
    assert_eq!(report["verification"][0]["passed"], true);
}

#[test]
fn approx_mode_requires_eps() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p5.gr", P5);
    let out = mwis(
        &["solve", "--graph", "p5.gr", "--class", "pt:6", "--mode", "approx"],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn empty_graph_file_solves_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "empty.gr", "");
    let out = mwis(
        &["solve", "--graph", "empty.gr", "--class", "pt:4", "--mode", "exact"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["weight"], 0);
    assert_eq!(report["result"]["set"].as_array().unwrap().len(), 0);
}

#[test]
fn malformed_inputs_exit_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "bad.gr", "p 2 5\n");
    let out = mwis(
        &["solve", "--graph", "bad.gr", "--class", "pt:4", "--mode", "exact"],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    let out = mwis(
        &["solve", "--graph", "missing.gr", "--class", "nope:4", "--mode", "exact"],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    let out = mwis(&["solve"], dir.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn reports_replay_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p5.gr", P5);
    let args = [
        "solve", "--graph", "p5.gr", "--class", "pt:6", "--mode", "approx", "--eps", "1/4",
        "--oracle", "--seed", "7",
    ];
    let a = mwis(&args, dir.path());
    let b = mwis(&args, dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let a = mwis(&["gen", "path:10", "--seed", "1"], dir.path());
    let b = mwis(&["gen", "path:10", "--seed", "1"], dir.path());
    let c = mwis(&["gen", "path:10", "--seed", "2"], dir.path());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let f1 = mwis(&["gen", "random:8:1/3", "--seed", "5", "--out", "a.gr"], dir.path());
    let f2 = mwis(&["gen", "random:8:1/3", "--seed", "5", "--out", "b.gr"], dir.path());
    assert_eq!(code(&f1), 0);
    assert_eq!(code(&f2), 0);
    assert_eq!(
        std::fs::read(dir.path().join("a.gr")).unwrap(),
        std::fs::read(dir.path().join("b.gr")).unwrap()
    );
}

const P3: &str = "p 3 2\ne 0 1\ne 1 2\n";
const P3_ESD: &str = r#"{"pattern": {"n": 1, "edges": []}, "eta": {"vertices": [[0,1,2]], "edges": [], "triangles": []}}"#;
const P3_ESD_TAMPERED: &str = r#"{"pattern": {"n": 2, "edges": []}, "eta": {"vertices": [[0,1],[1,2]], "edges": [], "triangles": []}}"#;

#[test]
fn validate_accepts_own_trivial_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p3.gr", P3);
    write(dir.path(), "d.json", P3_ESD);
    let out = mwis(
        &["validate", "--graph", "p3.gr", "--esd", "d.json", "--atoms"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["tables"]["atoms"].as_array().unwrap().len(), 1);
}

#[test]
fn validate_rejects_tampered_partition() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p3.gr", P3);
    write(dir.path(), "d.json", P3_ESD_TAMPERED);
    let out = mwis(&["validate", "--graph", "p3.gr", "--esd", "d.json"], dir.path());
    assert_eq!(code(&out), 2);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // The duplicated vertex is named in the violation detail.
    assert!(report["verification"][0]["detail"].as_str().unwrap().contains('1'));
}

#[test]
fn validate_checks_shattering() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p3.gr", P3);
    write(dir.path(), "d.json", P3_ESD);
    let out = mwis(
        &["validate", "--graph", "p3.gr", "--esd", "d.json", "--shatter", "0,1,2"],
        dir.path(),
    );
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let shatter = report["verification"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == "shatters")
        .unwrap();
    assert!(shatter["passed"].is_boolean());
}

#[test]
fn solve_cross_checks_an_external_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "p3.gr", P3);
    write(dir.path(), "d.json", P3_ESD);
    write(dir.path(), "bad.json", P3_ESD_TAMPERED);
    let out = mwis(
        &[
            "solve", "--graph", "p3.gr", "--class", "pt:4", "--mode", "exact",
            "--external-esd", "d.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let out = mwis(
        &[
            "solve", "--graph", "p3.gr", "--class", "pt:4", "--mode", "exact",
            "--external-esd", "bad.json",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
}

#[test]
fn solve_supports_explicit_patterns() {
    let dir = tempfile::tempdir().unwrap();
    // Forbid the three-vertex path; a triangle is P3-free.
    write(dir.path(), "h.gr", P3);
    write(dir.path(), "k3.gr", "p 3 3\nn 0 2\nn 1 5\nn 2 3\ne 0 1\ne 1 2\ne 0 2\n");
    let out = mwis(
        &["solve", "--graph", "k3.gr", "--class", "hfree:h.gr", "--mode", "exact", "--oracle"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["result"]["weight"], 5);
}

#[test]
fn bench_runs_a_directory_and_checks_ratios() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("inst")).unwrap();
    for seed in 1..=3 {
        let out = mwis(
            &[
                "gen",
                "filtered:pt:5:8:1/3",
                "--seed",
                &seed.to_string(),
                "--out",
                &format!("inst/i{seed}.gr"),
            ],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
    }
    let out = mwis(
        &["bench", "--dir", "inst", "--class", "pt:5", "--eps", "1/4", "--oracle"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = report["tables"]["results"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(report["verification"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["passed"] == true));
}
