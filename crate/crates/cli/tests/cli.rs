use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn ample(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ample")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn recheck(report: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ample"))
        .args(["recheck", "--report", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(report).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn verify_example13() {
    let out = ample(&["verify", "--oracle", "example13", "--r", "2", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "ample");

    let out = ample(&["verify", "--oracle", "example13", "--r", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "counterexample");
    let re = recheck(&out.stdout);
    assert_eq!(re.status.code(), Some(0));
    assert_eq!(json(&re)["certificates"][0]["confirmed"], true);
}

#[test]
fn dedekind_and_resilience() {
    let out = ample(&["dedekind", "--k", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), r#"{"M_prime":19,"k":3}"#);

    let v = json(&ample(&["resilience", "--r", "5", "--family", "[[7]]"]));
    assert_eq!(v["level"], 4);
    assert_eq!(v["simply_connected"], true);

    let out = ample(&["dedekind", "--k", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["name"], "dedekind_k");
}

#[test]
fn betti_and_witness() {
    let v = json(&ample(&["betti", "--oracle", "example13"]));
    assert_eq!(v["betti"], serde_json::json!([1, 14, 0]));
    assert_eq!(v["f_vector"], serde_json::json!([13, 39, 13]));

    let v = json(&ample(&["witness", "--oracle", "example13", "--u", "0,1", "--a", "[[0,1]]"]));
    assert_eq!(v["witness"], 4);
}

#[test]
fn missing_witness_is_certified() {
    let dir = std::env::temp_dir().join(format!("ample-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k4.json");
    std::fs::write(&path, r#"{"version":1,"vertices":[0,1,2,3],"facets":[[0,1,2,3]],"dim_cap":3}"#).unwrap();
    let spec = format!("file:{}", path.display());
    let out = ample(&["witness", "--oracle", &spec, "--u", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&recheck(&out.stdout))["certificates"][0]["confirmed"], true);
    let out = ample(&["verify", "--oracle", &spec, "--r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ample(&["verify", "--oracle", "bogus:1", "--r", "1"]).status.code(), Some(2));
    assert_eq!(ample(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ample(&["betti", "--oracle", "hash:n=10"]).status.code(), Some(2));
}

#[test]
fn params_report() {
    let v = json(&ample(&["params", "--r", "2", "--n", "256", "--p", "0.5"]));
    assert_eq!(v["min_vertices"]["exact"], 7);
    assert_eq!(v["min_vertices"]["binomial"], 6);
    assert_eq!(v["existence_threshold"], 128);
    assert_eq!(v["certified_paley"]["n"], 17449884689u64);
    let bound = v["not_ample_bound"]["value"].as_f64().unwrap();
    assert!((bound - 0.0797).abs() < 1e-3);
}

#[test]
fn small_commands_are_deterministic() {
    let runs = [
        vec!["solve", "--ctx", "field:n=1009,p=7", "--r", "2", "--challenges", "20", "--seed", "5"],
        vec!["audit-charsum", "--q", "29", "--m", "4", "--d", "3", "--trials", "30", "--seed", "2"],
        vec!["sphere-audit", "--count", "5", "--splits", "30", "--seed", "9"],
        vec!["fill", "--oracle", "hash:n=4096,p=0.5,dim=5,seed=3", "--loops", "4", "--seed", "1"],
        vec!["explore", "--ctx", "field:n=13,p=3", "--trials", "10"],
    ];
    for args in runs {
        let a = ample(&[&args[..], &["--threads", "1"]].concat());
        let b = ample(&[&args[..], &["--threads", "3"]].concat());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_ne!(a.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn sampled_verification_only_refutes() {
    let v = json(&ample(&[
        "verify",
        "--oracle",
        "hash:n=2000,p=0.5,dim=3,seed=1",
        "--r",
        "2",
        "--mode",
        "sampled",
        "--trials",
        "500",
    ]));
    assert!(v["verdict"] == "not-refuted" || v["verdict"] == "counterexample");
    assert_eq!(v["trials"], 500);
}
