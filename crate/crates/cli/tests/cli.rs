use std::path::PathBuf;
use std::process::{Command, Output};

use rescode_core::corpus::named;
use rescode_core::matching::minimum_matching;

fn rescode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rescode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn code_figure1_header_and_count() {
    let o = rescode(&["code", "--instance", "figure1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("faces: s1,s2,s3,s4,s5"));
    assert_eq!(lines.count(), 14);
}

#[test]
fn decode_zero_code_gives_minimum_matching() {
    let o = rescode(&["decode", "--instance", "figure1", "00000"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let edges: Vec<usize> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().parse().unwrap())
        .collect();
    let g = named("figure1").unwrap().graph;
    assert_eq!(edges, minimum_matching(&g).unwrap().edge_list());
}

#[test]
fn verify_coronene_passes_in_the_non_forcing_branch() {
    let o = rescode(&["verify", "--instance", "coronene"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("PASS idim_equals_n_iff_forcing"));
    assert!(text.contains("forcing false"));
}

#[test]
fn verify_json_is_well_formed() {
    let o = rescode(&["verify", "--instance", "figure3", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["quantities"]["idim"], 4);
    assert_eq!(v["quantities"]["n"], 5);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["code", "--instance", "figure1"][..],
        &["resonance", "--instance", "figure3"][..],
        &["rfd", "--instance", "coronene", "--format", "json"][..],
        &["verify", "--instance", "bridged"][..],
    ] {
        assert_eq!(stdout(&rescode(args)), stdout(&rescode(args)), "{args:?}");
    }
}

#[test]
fn resonance_dot_labels_nodes_with_codes() {
    let o = rescode(&["resonance", "--instance", "naphthalene"]);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph resonance {"));
    assert!(dot.contains("[label=\"s1\"]"));
    assert_eq!(dot.matches("\\nM").count(), 3);
    assert!(dot.contains("label=\"00\\nM"));
}

#[test]
fn order_accepts_both_spellings() {
    let a = stdout(&rescode(&[
        "code",
        "--instance",
        "chain(3)",
        "--order",
        "s2,s1,s3",
    ]));
    let b = stdout(&rescode(&[
        "code",
        "--instance",
        "chain(3)",
        "--order",
        "2,1,3",
    ]));
    assert_eq!(a, b);
    assert!(a.starts_with("faces: s2,s1,s3\n"));
}

#[test]
fn export_round_trips_through_input() {
    let dir = std::env::temp_dir().join(format!("rescode-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("figure3.json");
    let path = path.to_str().unwrap();
    assert!(rescode(&["export", "--instance", "figure3", "--out", path])
        .status
        .success());
    let from_file = stdout(&rescode(&["code", "--input", path, "--order", "1,2,3,4"]));
    let from_name = stdout(&rescode(&["code", "--instance", "figure3"]));
    assert_eq!(from_file, from_name);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| rescode(args).status.code().unwrap();
    assert_eq!(code(&["validate", "--instance", "hexagon"]), 0);
    assert_eq!(code(&["validate", "--instance", "no-such-thing"]), 2);
    assert_eq!(code(&["validate"]), 2);
    assert_eq!(code(&["code", "--input", &fixture("annulus.json")]), 3);
    assert_eq!(code(&["verify", "--input", &fixture("annulus.json")]), 3);
    assert_eq!(code(&["code", "--instance", "coronene"]), 4);
    assert_eq!(
        code(&["resonance", "--instance", "figure1", "--cap", "5"]),
        6
    );
    assert_eq!(code(&["decode", "--instance", "naphthalene", "0"]), 1);
    assert_eq!(
        code(&["rfd", "--instance", "chain(3)", "--order", "1,3,2"]),
        1
    );
}

#[test]
fn malformed_input_is_a_validation_error() {
    let dir = std::env::temp_dir().join(format!("rescode-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    let hexagon = stdout(&rescode(&["export", "--instance", "hexagon"]));
    std::fs::write(&path, hexagon.replace("[0,2,4,5,3,1]", "[0,1,3,5,4,2]")).unwrap();
    let o = rescode(&["validate", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid embedding"));
    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(
        rescode(&["validate", "--input", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_name_the_offending_entity() {
    let o = rescode(&["decode", "--instance", "naphthalene", "01"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("code 01"), "{}", stderr(&o));
    let o = rescode(&["code", "--input", &fixture("annulus.json")]);
    assert!(stderr(&o).contains("vertex 0"));
}

#[test]
fn components_lists_forbidden_edges() {
    let o = rescode(&["components", "--instance", "figure3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weakly_elementary"], true);
    assert_eq!(v["forbidden_edges"].as_array().unwrap().len(), 2);
    assert_eq!(v["excluded_faces"], serde_json::json!([5]));
}

#[test]
fn bench_prints_a_table() {
    let o = rescode(&["bench", "--instance", "figure1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("instance"));
    assert!(text.lines().nth(1).unwrap().starts_with("figure1"));
}
