use std::process::{Command, Output};

use serde_json::Value;

fn radon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radon")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn dims(report: &Value) -> Vec<u64> {
    report["components"].as_array().unwrap().iter().map(|c| c["dimension"].as_u64().unwrap()).collect()
}

#[test]
fn decompose_examples() {
    let r = json(&radon(&["decompose", "--family", "subset", "--n", "6", "--s", "3", "--format", "json"]));
    assert_eq!(dims(&r), vec![1, 5, 9, 5]);
    let r = json(&radon(&["decompose", "--family", "subspace", "--n", "4", "--s", "2", "--q", "2"]));
    assert_eq!(dims(&r), vec![1, 14, 20]);
    assert_eq!(r["q"], 2);
}

#[test]
fn upper_levels_use_the_mirror_filtration() {
    let r = json(&radon(&["decompose", "--family", "subset", "--n", "4", "--s", "3"]));
    assert_eq!(dims(&r), vec![1, 3]);
    assert_eq!(r["side"], "dual");
    assert_eq!(r["level"], 3);
}

#[test]
fn decompose_matches_golden() {
    let out = radon(&["decompose", "--family", "subset", "--n", "4", "--s", "2"]);
    assert_eq!(stdout(&out), include_str!("golden/decompose_subset_n4_s2.json"));
}

#[test]
fn spherical_tables() {
    let out = radon(&["spherical", "--family", "subset", "--n", "4", "--s", "1", "--format", "csv"]);
    assert_eq!(stdout(&out), "t,j0,j1\n0,1/1,1/1\n1,1/1,-1/3\n");
    let out = radon(&["spherical", "--family", "subspace", "--n", "4", "--s", "2", "--q", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), include_str!("golden/spherical_subspace_n4_s2_q2.csv"));
}

#[test]
fn spherical_oracle_verdict() {
    let r = json(&radon(&["spherical", "--family", "subspace", "--n", "3", "--s", "1", "--q", "2", "--check", "oracle"]));
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["closed_form"], r["oracle"]);
    assert_eq!(r["oracle"]["rows"][1]["values"][1], "-1/6");
}

#[test]
fn verify_subset_all_pass() {
    let r = json(&radon(&["verify", "--family", "subset", "--n", "6", "--jobs", "2"]));
    assert_eq!(r["summary"]["fail"], 0);
    assert!(r["summary"]["pass"].as_u64().unwrap() > 100);
}

#[test]
fn verify_subspace_records_the_complement_count_gap() {
    let out = radon(&["verify", "--family", "subspace", "--n", "4", "--q", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(!text.contains(",fail,"));
    let line = text.lines().find(|l| l.contains("lemma2/printed/s=2,j=2")).unwrap();
    assert!(line.contains("paper-discrepancy"));
    assert!(line.contains("oracle 6, printed 12/1"));
}

#[test]
fn verify_theorem5_pairing() {
    let r = json(&radon(&["verify", "--family", "subspace", "--n", "2", "--q", "2", "--check", "theorem5"]));
    let rec = r["records"].as_array().unwrap().iter().find(|x| x["id"].as_str().unwrap().ends_with("pairing/s=1")).unwrap();
    assert_eq!(rec["status"], "pass");
    assert!(rec["witness"].as_str().unwrap().starts_with("value 1/2"));
}

#[test]
fn count_tables() {
    let out = radon(&["count", "--family", "subset", "--n", "4", "--s", "2", "--check", "omega", "--format", "csv"]);
    assert_eq!(
        stdout(&out),
        "kind,parameters,closed_form,oracle,printed,agree\n\
         omega,\"n=4,s=2,j=0\",1,1,,true\n\
         omega,\"n=4,s=2,j=1\",4,4,,true\n\
         omega,\"n=4,s=2,j=2\",1,1,,true\n"
    );
    let r = json(&radon(&["count", "--family", "subspace", "--n", "4", "--s", "2", "--q", "2", "--check", "n-j"]));
    let rows = r["rows"].as_array().unwrap();
    let oracle: Vec<&str> = rows.iter().map(|x| x["oracle"].as_str().unwrap()).collect();
    assert_eq!(oracle, vec!["1", "9", "6"]);
    assert_eq!(rows[2]["printed"], "12/1");
    let r = json(&radon(&["count", "--family", "subspace", "--n", "3", "--s", "1", "--q", "2", "--check", "lemma1"]));
    assert_eq!(r["agree"], true);
}

#[test]
fn output_file_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["verify", "--family", "subspace", "--n", "3", "--q", "3"];
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let out = radon(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, radon(&args).stdout);
    let mut parallel = args.to_vec();
    parallel.extend(["--jobs", "3"]);
    assert_eq!(written, radon(&parallel).stdout);
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &["decompose", "--n", "4", "--s", "2"],
        &["decompose", "--family", "subset", "--n", "4"],
        &["decompose", "--family", "subset", "--n", "4", "--s", "5"],
        &["decompose", "--family", "subset", "--n", "4", "--s", "2", "--q", "2"],
        &["decompose", "--family", "subspace", "--n", "4", "--s", "2", "--q", "6"],
        &["decompose", "--family", "subspace", "--n", "4", "--s", "2"],
        &["decompose", "--family", "lattice", "--n", "4", "--s", "2"],
        &["verify", "--family", "subset", "--n", "4", "--check", "everything"],
        &["verify", "--grid", "--n", "4"],
        &["count", "--family", "subset", "--n", "4", "--check", "n-j"],
        &["count", "--family", "subset", "--n", "4", "--check", "nope"],
        &["spherical", "--family", "subset", "--n", "4", "--s", "1", "--check", "other"],
        &["verify", "--family", "subspace", "--n", "9", "--q", "3"],
        &["frobnicate"],
    ];
    for args in cases {
        let out = radon(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(radon(&["--help"]).status.code(), Some(0));
    assert_eq!(radon(&["verify", "--help"]).status.code(), Some(0));
}
