use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recolor-lab")).args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_recolor-lab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&o.stderr))
    })
}

fn without_meta(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("meta");
    v
}

#[test]
fn hexagon_does_not_mix_with_three_colors() {
    let c6 = data("c6.edges");
    let o = run(&["mixing", "--k", "3", "--input", c6.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["connected"], false);
    let frozen = v["result"]["frozen"].as_array().unwrap();
    assert!(frozen.contains(&serde_json::json!([1, 2, 3, 1, 2, 3])));
}

#[test]
fn decompose_recovers_five_blocks() {
    let o = run(&["decompose", "--input", data("fig3.edges").to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(
        v["result"]["blocks"],
        serde_json::json!([[0, 1], [2, 3], [4], [5], [6, 7, 8, 9, 10]])
    );
    assert_eq!(v["result"]["sizes"], serde_json::json!([2, 1, 1, 1, 3]));
    assert_eq!(v["result"]["clique_skeleton"]["n"], 8);
}

#[test]
fn graph6_round_trip_through_stdin() {
    let o = run_stdin(&["emit", "--to", "graph6"], "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    assert!(o.status.success());
    let g6 = String::from_utf8(o.stdout).unwrap();
    let back = run_stdin(&["parse"], &g6);
    let v = json(&back);
    assert_eq!(v["result"]["graph"]["n"], 6);
    assert_eq!(v["result"]["edge_count"], 6);
}

#[test]
fn plan_returns_a_valid_walk() {
    let dir = std::env::temp_dir().join(format!("recolor-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.json"), dir.join("b.json"));
    std::fs::write(&a, "[1,2,1,2,1,2]").unwrap();
    std::fs::write(&b, "[2,3,1,3,2,1]").unwrap();
    let c6 = data("c6.edges");
    let o = run(&[
        "plan", "--ell", "4", "--from", a.to_str().unwrap(), "--to", b.to_str().unwrap(),
        "--input", c6.to_str().unwrap(), "--trace",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["result"]["found"], true);
    let mut cur = vec![1u64, 2, 1, 2, 1, 2];
    for s in v["result"]["schedule"].as_array().unwrap() {
        let (x, c) = (s[0].as_u64().unwrap() as usize, s[1].as_u64().unwrap());
        cur[x] = c;
        assert!(cur[(x + 1) % 6] != c && cur[(x + 5) % 6] != c, "improper step");
    }
    assert_eq!(cur, vec![2, 3, 1, 3, 2, 1]);
    assert!(v["result"]["trace"].is_object());
}

#[test]
fn random_campaigns_are_reproducible() {
    let args = [
        "verify", "class", "--class", "P5,diamond", "--count", "6", "--random-n", "7", "--seed", "11",
    ];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success());
    assert_eq!(without_meta(json(&a)), without_meta(json(&b)));
}

#[test]
fn random_mode_requires_a_seed() {
    let o = run(&["verify", "class", "--count", "3", "--random-n", "6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_and_guard_exit_codes() {
    let c6 = data("c6.edges");
    let bad = run_stdin(&["parse", "--format", "edge-list"], "3 1\n0 7\n");
    assert_eq!(bad.status.code(), Some(2));
    let guard = run(&["mixing", "--k", "6", "--mem-budget", "100", "--input", c6.to_str().unwrap()]);
    assert_eq!(guard.status.code(), Some(3));
}

/// The drawn labeling of the blowup is not frozen, so this gate fails.
#[test]
fn figure2_gate_reports_the_movable_labeling() {
    let o = run(&["verify", "figure2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    let failing: Vec<&str> = v["result"]["assertions"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|a| a["pass"] == false)
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["labeling frozen"]);
    assert_eq!(v["result"]["counterexamples"][0]["facts"][0]["fact"], "movable");
}
