use std::process::Command;

use cycgroups::cli::run;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("cycgroups").chain(args.iter().copied()).map(String::from).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const KLEIN: &str = "# Klein four-group\n4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n";

#[test]
fn analyze_expression() {
    let (code, out, err) = invoke(&["analyze", "S3"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("|C(G)|           5\n"));
    assert!(out.contains("label            S3\n"));
    assert!(out.contains("c_k              c_1=1 c_2=3 c_3=1\n"));
    assert!(out.contains("sum c_k*phi(k)   6 (|G| = 6) ok"));
}

#[test]
fn analyze_json() {
    let (code, out, _) = invoke(&["analyze", "C3 x C5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"], 15);
    assert_eq!(v["count_cyclic"], 4);
    assert_eq!(v["label"], "C_pq(p=3,q=5)");
    assert_eq!(v["predicted_count"], 4);
    assert_eq!(v["pi"], serde_json::json!([3, 5]));
    assert_eq!(v["pi_e"], serde_json::json!([1, 3, 5, 15]));
    assert_eq!(v["counting"]["weighted_sum"], 15);
}

#[test]
fn analyze_cayley_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("klein4.tbl");
    std::fs::write(&path, KLEIN).unwrap();
    let (code, out, _) = invoke(&["analyze", "--cayley", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("|C(G)|           4\n"));
    assert!(out.contains("label            PAPER_GAP(n=4)\n"));
}

#[test]
fn family_labels_round_trip_through_analyze() {
    for expr in ["C1", "C7", "C25", "C27", "C16", "C81", "C6", "C35", "S3", "Q8", "C3 x C3"] {
        let (code, out, _) = invoke(&["analyze", expr, "--format", "json"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["predicted_count"], v["count_cyclic"], "{expr}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(invoke(&["analyze", "C3xC3"]).0, 1);
    assert_eq!(invoke(&["analyze", "Q12"]).0, 1);
    assert_eq!(invoke(&["analyze"]).0, 1);
    assert_eq!(invoke(&["frobnicate"]).0, 1);
    assert_eq!(invoke(&["enumerate", "13"]).0, 1);
    assert_eq!(invoke(&["verify"]).0, 1);
    assert_eq!(invoke(&["--help"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tbl");
    std::fs::write(&bad, "2\n0 1\n1 1\n").unwrap();
    let (code, _, err) = invoke(&["analyze", "--cayley", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("Latin"));
    let missing = dir.path().join("missing.tbl");
    assert_eq!(invoke(&["analyze", "--cayley", missing.to_str().unwrap()]).0, 2);
}

#[test]
fn verify_json_and_strict() {
    let (code, out, _) = invoke(&["verify", "--max-order", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["max_order"], 6);
    let totals: Vec<u64> =
        v["orders"].as_array().unwrap().iter().map(|o| o["total_groups"].as_u64().unwrap()).collect();
    assert_eq!(totals, vec![1, 1, 1, 2, 1, 2]);
    let gap = &v["orders"][3]["mismatches"][0];
    assert_eq!(gap["kind"], "paper_gap");
    assert_eq!(gap["count_cyclic"], 4);
    assert_eq!(gap["label"], "PAPER_GAP(n=4)");

    assert_eq!(invoke(&["verify", "--max-order", "6", "--strict"]).0, 3);
    assert_eq!(invoke(&["verify", "--max-order", "3", "--strict"]).0, 0);
}

#[test]
fn verify_is_deterministic_across_jobs() {
    let a = invoke(&["verify", "--max-order", "12", "--format", "json"]).1;
    let b = invoke(&["verify", "--max-order", "12", "--format", "json", "--jobs", "4"]).1;
    assert_eq!(a, b);
}

#[test]
fn enumerate_emits_tables() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("tables");
    let (code, out, _) = invoke(&["enumerate", "8", "--emit-cayley", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("order 8: 5 groups\n"));
    let mut files: Vec<_> = std::fs::read_dir(&target).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 5);
    for f in files {
        let g = cycgroups::tablefile::read_cayley(&f).unwrap();
        assert_eq!(g.order(), 8);
    }
}

#[test]
fn poset_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q8.dot");
    let (code, _, _) = invoke(&["poset", "Q8", "--dot", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert_eq!(dot.matches("[label=").count(), 5);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert!(dot.contains("n0 [label=\"C_1 #0\"];"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_cycgroups");
    let status = Command::new(bin).args(["verify", "--max-order", "4", "--strict"]).output().unwrap();
    assert_eq!(status.status.code(), Some(3));
    let status = Command::new(bin).args(["analyze", "C5 x"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    assert!(status.stdout.is_empty());
    let ok = Command::new(bin).args(["analyze", "Q8"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().contains("Q8"));
}
