use std::process::Command;

use serde_json::Value;

fn provar(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_provar")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = provar(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn fold_gives_three_vertices() {
    let g = json(&["fold", "-a", "ab", "baB,bbA"]);
    assert_eq!(g["vertices"], 3);
    assert_eq!(g["edges"].as_array().unwrap().len(), 4);
    assert_eq!(g["base"], 0);
}

#[test]
fn power_sugar_matches_plain_words() {
    assert_eq!(json(&["fold", "a^3,(ab)^2"]), json(&["fold", "aaa,abab"]));
}

#[test]
fn su_closure_of_cube() {
    let r = json(&["closure", "--variety", "su", "aaa"]);
    assert_eq!(r["generators"], serde_json::json!(["aaa"]));
    assert_eq!(r["status"], "SOUND_UPPER");
    assert!(!r["primes_used"].as_array().unwrap().is_empty());
}

#[test]
fn hp_denseness_of_square() {
    let r = json(&["dense", "--variety", "hp:3", "-a", "ab", "aa"]);
    assert_eq!(r["dense"], false);
    let (code, out, _) = provar(&["dense", "--variety", "hp:3", "aa", "--format", "text", "--exit-status"]);
    assert_eq!((code, out.as_str()), (1, "false\n"));
}

#[test]
fn member_and_exit_status() {
    let (code, out, _) = provar(&["member", "-w", "bbA", "baB,bbA", "--format", "text", "--exit-status"]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (code, _, _) = provar(&["member", "-w", "a", "baB,bbA", "--exit-status"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(provar(&["closure", "--variety", "gp:4", "a"]).0, 2);
    assert_eq!(provar(&["fold", "acx"]).0, 2);
    assert_eq!(provar(&["bogus"]).0, 2);
    assert_eq!(provar(&["fold"]).0, 2);
    assert_eq!(provar(&["dense", "--variety", "su", "--format", "dot", "a"]).0, 2);
}

#[test]
fn fringe_cap_exits_three() {
    let (code, _, err) = provar(&["fringe", "--fringe-cap", "3", "abAB"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn intersect_and_join() {
    let meet = json(&["intersect", "aa", "aaa"]);
    assert_eq!(meet, json(&["fold", "a^6"]));
    let j = json(&["join", "aa", "aaa"]);
    assert_eq!(j, json(&["fold", "a"]));
}

#[test]
fn subgroup_file_gives_array() {
    let dir = std::env::temp_dir().join(format!("provar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("subgroups.txt");
    std::fs::write(&path, "# two subgroups\nbaB,bbA\naa  # squares\n").unwrap();
    let r = json(&["closure", "--variety", "gp:3", "-f", path.to_str().unwrap()]);
    let arr = r.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[1]["generators"], serde_json::json!(["a"]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn schreier_basis_size_is_rank() {
    let s = json(&["schreier", "abAb,BAbAb,AB,BabbbAb"]);
    assert_eq!(s["basis"].as_array().unwrap().len(), 4);
    assert_eq!(s["transversal"].as_array().unwrap().len(), 6);
}

#[test]
fn export_round_trips_through_json() {
    let dir = std::env::temp_dir().join(format!("provar-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.json");
    let p = path.to_str().unwrap();
    assert_eq!(provar(&["export", "baB,bbA", "-o", p]).0, 0);
    let (code, dot, _) = provar(&["export", "--graph", p, "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot, provar(&["fold", "baB,bbA", "--format", "dot"]).1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_reports_witnesses() {
    let (code, out, err) = provar(&["verify", "--variety", "su", "-w", "a", "aaa", "--format", "text"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().all(|l| l.starts_with("PASS") || l.starts_with("OPEN") || l.starts_with("WARN")));
    assert!(out.contains("a outside closure is separated from H"));
}

#[test]
fn output_is_deterministic() {
    let args = ["closure", "--variety", "nil", "abAB,aab", "--verbose"];
    assert_eq!(provar(&args), provar(&args));
}

#[test]
fn reproduce_single_check() {
    let (code, out, _) = provar(&["reproduce", "--only", "figure1"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 1);
    let r = json(&["reproduce", "--only", "morphisms", "--json"]);
    assert_eq!(r["passed"], 1);
    assert_eq!(provar(&["reproduce", "--only", "nope"]).0, 2);
}
