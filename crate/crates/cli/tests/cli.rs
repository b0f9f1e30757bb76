//! End-to-end tests of the syzlab binary: exit codes, wire formats,
//! determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args(args)
        .env_remove("SYZLAB_WINDOW")
        .output()
        .expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args(args)
        .env_remove("SYZLAB_WINDOW")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn generate_families() {
    let out = run(&["generate", "koszul", "--n", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "{\"n\":3,\"degrees\":[0,1,2,3,4],\"betti\":[1,4,6,4,1]}\n"
    );

    let out = run(&["generate", "eagon-northcott", "--n", "3", "--d", "1", "--a", "2"]);
    assert_eq!(
        stdout(&out),
        "{\"n\":3,\"degrees\":[0,2,3,4,5],\"betti\":[1,10,20,15,4]}\n"
    );

    let out = run(&["generate", "hk", "--degrees", "0,3,4,7", "--n", "2"]);
    assert_eq!(
        stdout(&out),
        "{\"n\":2,\"degrees\":[0,3,4,7],\"betti\":[1,7,7,1]}\n"
    );

    let out = run(&["generate", "gorenstein", "--n", "2", "--t", "2"]);
    assert_eq!(
        stdout(&out),
        "{\"n\":2,\"degrees\":[0,3,4,7],\"betti\":[1,7,7,1]}\n"
    );
}

#[test]
fn generate_rejects_bad_params() {
    let out = run(&["generate", "koszul"]);
    assert_eq!(code(&out), 2);
    let out = run(&["generate", "hk", "--degrees", "0,2,1,3", "--n", "2"]);
    assert_eq!(code(&out), 2);
    let out = run(&["generate", "unknown-family", "--n", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_koszul_all_yes() {
    let out = run(&["check", "--family", "koszul", "--n", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for check in doc["checks"].as_array().unwrap() {
        for v in check["verdicts"].as_array().unwrap() {
            assert_eq!(v["status"], "yes");
        }
    }
}

#[test]
fn check_exceptionality_failure_carries_witness() {
    let out = run(&[
        "check", "--family", "eagon-northcott", "--n", "3", "--d", "2", "--a", "1",
        "--which", "exceptional", "--format", "json",
    ]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let verdicts = doc["checks"][0]["verdicts"].as_array().unwrap();
    assert_eq!(verdicts[0]["status"], "no");
    let reason = verdicts[0]["reasons"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["ref"] == "exceptional/condition-i")
        .unwrap();
    assert_eq!(reason["witness"]["value"], serde_json::json!(-23));
}

#[test]
fn check_gorenstein_cites_degree_step() {
    let out = run(&[
        "check", "--family", "gorenstein", "--n", "2", "--t", "2",
        "--which", "exceptional", "--format", "json",
    ]);
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reasons = doc["checks"][0]["verdicts"][0]["reasons"].as_array().unwrap();
    let cond_ii = reasons
        .iter()
        .find(|r| r["ref"] == "exceptional/condition-ii")
        .unwrap();
    assert_eq!(cond_ii["witness"]["holds"], serde_json::json!(false));
    assert_eq!(cond_ii["witness"]["d1"], serde_json::json!(3));
}

#[test]
fn check_g_side_names_bundles() {
    let out = run(&[
        "check", "--family", "koszul", "--n", "3", "--side", "g",
        "--which", "simplicity", "--format", "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("simplicity,G_1,yes"));
    assert!(text.contains("simplicity,G_2,yes"));
}

#[test]
fn exit_codes_separate_no_and_undetermined() {
    // two copies of the Koszul complex: decomposable syzygies
    let doubled = "{\"n\":2,\"degrees\":[0,1,2,3],\"betti\":[2,6,6,2]}";
    let out = run_with_stdin(&["check", "--input", "-", "--which", "simplicity"], doubled);
    assert_eq!(code(&out), 1);
    let out = run_with_stdin(&["check", "--input", "-", "--which", "exceptional"], doubled);
    assert_eq!(code(&out), 3);
    // both together: No dominates
    let out = run_with_stdin(&["check", "--input", "-"], doubled);
    assert_eq!(code(&out), 1);
}

#[test]
fn check_rejects_invalid_resolution() {
    let bad = "{\"n\":2,\"degrees\":[0,1,2,3],\"betti\":[1,3,3,2]}";
    let out = run_with_stdin(&["check", "--input", "-"], bad);
    assert_eq!(code(&out), 2);
    let out = run_with_stdin(&["check", "--input", "-"], "not json");
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_passes_on_catalog_data() {
    for args in [
        vec!["verify", "--family", "koszul", "--n", "3"],
        vec!["verify", "--family", "eagon-northcott", "--n", "3", "--d", "1", "--a", "2"],
    ] {
        let out = run(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn verify_gates_on_exactness() {
    let bad = "{\"n\":2,\"degrees\":[0,1,2,3],\"betti\":[1,3,3,2]}";
    let out = run_with_stdin(&["verify", "--input", "-"], bad);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("FAIL exactness"));
    assert!(text.lines().filter(|l| l.starts_with("SKIP")).count() == 4);
}

#[test]
fn cohomology_csv_frozen_table() {
    let out = run(&[
        "cohomology", "--family", "koszul", "--n", "2",
        "--bundle", "F1", "--window", "-5:2",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "t,q0,q1,q2\n-5,0,0,24\n-4,0,0,15\n-3,0,0,8\n-2,0,0,3\n-1,0,0,0\n0,0,1,0\n1,0,0,0\n2,3,0,0\n"
    );
}

#[test]
fn cohomology_tensor_endomorphism() {
    let out = run(&[
        "cohomology", "--family", "koszul", "--n", "2",
        "--bundle", "F1xF1v", "--window", "0:0",
    ]);
    assert_eq!(stdout(&out), "t,q0,q1,q2\n0,1,0,0\n");
}

#[test]
fn cohomology_window_sources() {
    // env var provides the default window
    let out = Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args(["cohomology", "--family", "koszul", "--n", "2", "--bundle", "F1v"])
        .env("SYZLAB_WINDOW", "-1:1")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4); // header + three twists

    // explicit flag wins over the env var
    let out = Command::new(env!("CARGO_BIN_EXE_syzlab"))
        .args([
            "cohomology", "--family", "koszul", "--n", "2",
            "--bundle", "F1v", "--window", "0:0",
        ])
        .env("SYZLAB_WINDOW", "-5:5")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);

    // inverted window is invalid
    let out = run(&[
        "cohomology", "--family", "koszul", "--n", "2",
        "--bundle", "F1", "--window", "5:2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn cohomology_rejects_bad_bundle_spec() {
    let out = run(&[
        "cohomology", "--family", "koszul", "--n", "2", "--bundle", "Q3",
    ]);
    assert_eq!(code(&out), 2);
    // index out of range for n = 2
    let out = run(&[
        "cohomology", "--family", "koszul", "--n", "2", "--bundle", "F2",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn outputs_are_byte_deterministic() {
    let args = [
        "check", "--family", "eagon-northcott", "--n", "3", "--d", "1", "--a", "2",
        "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(code(&a), code(&b));

    let args = [
        "cohomology", "--family", "gorenstein", "--n", "2", "--t", "2",
        "--bundle", "F1xF1v", "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pretty_and_json_encode_identical_verdicts() {
    let pretty = run(&[
        "check", "--family", "gorenstein", "--n", "3", "--t", "1", "--which", "both",
    ]);
    let json_out = run(&[
        "check", "--family", "gorenstein", "--n", "3", "--t", "1",
        "--which", "both", "--format", "json",
    ]);
    assert_eq!(code(&pretty), code(&json_out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    let text = stdout(&pretty);
    for check in doc["checks"].as_array().unwrap() {
        let kind = check["kind"].as_str().unwrap();
        for v in check["verdicts"].as_array().unwrap() {
            let needle = format!(
                "{} {}: {}",
                v["bundle"].as_str().unwrap(),
                kind,
                v["status"].as_str().unwrap()
            );
            assert!(text.contains(&needle), "missing {needle:?} in {text}");
        }
    }
}
