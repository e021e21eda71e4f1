use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn wfl(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wfl"));
    c.args(args).env_remove("WFL_THREADS").env_remove("WFL_BUDGET").env_remove("WFL_CACHE_DIR");
    for (k, v) in envs {
        c.env(k, v);
    }
    c.output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON document")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

#[test]
fn mconst_example() {
    let o = wfl(&["word", "mconst", "-l", "1", "-d", "1"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["result"], serde_json::json!({ "M": "341" }));
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["request"]["command"], "word mconst");
}

#[test]
fn dihedral_example() {
    let o = wfl(&["verify", "dihedral", "--o", "3"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["witness"]["Pi_G"], "4");
    assert_eq!(v["result"]["witness"]["product"], "2");
}

#[test]
fn fiber_max_example() {
    let o = wfl(
        &["fiber", "max", "--group", "sym:3", "--word", "x1 x2", "--auts", "aut", "--mode", "exact"],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["result"]["value"], "6");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["nope"],
        vec!["word", "parse", "--word", "y1"],
        vec!["group", "make", "--group", "foo:3"],
        vec!["verify", "submult", "-g", "dih:4", "-s", "order:4", "-w", "x1^2"],
        vec!["--threads", "0", "word", "mconst", "-l", "1", "-d", "1"],
    ] {
        let o = wfl(&args, &[]);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(json_of(&o)["status"], "usage-error", "{args:?}");
    }
}

#[test]
fn caps_and_budgets_exit_3() {
    let o = wfl(&["--order-cap", "10", "group", "make", "--group", "sym:4"], &[]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json_of(&o)["status"], "limit-exceeded");
    let o = wfl(&["fiber", "pi", "-g", "sym:4", "-w", "x1 x2 x3"], &[("WFL_BUDGET", "100")]);
    assert_eq!(o.status.code(), Some(3));
    // the flag wins over the environment
    let o = wfl(
        &["--budget", "1000000", "fiber", "pi", "-g", "sym:4", "-w", "x1 x2 x3"],
        &[("WFL_BUDGET", "100")],
    );
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn falsified_bound_exits_1() {
    let out = tempfile::tempdir().unwrap();
    let o = wfl(
        &[
            "verify",
            "battery",
            "--manifest",
            &fixture("falsified_bound.json"),
            "--out",
            out.path().to_str().unwrap(),
        ],
        &[],
    );
    assert_eq!(o.status.code(), Some(1));
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("check-000.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "fail");
    assert_eq!(report["result"]["witness"]["p_w"], "4/15");
    assert_eq!(report["result"]["witness"]["bound"], "2/15");
    assert!(out.path().join("summary.json").exists());
}

#[test]
fn empty_manifest_exits_0() {
    let out = tempfile::tempdir().unwrap();
    let o = wfl(
        &["verify", "battery", "--manifest", &fixture("empty.json"), "--out", out.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["result"]["summary"]["checks"], "0");
}

#[test]
fn malformed_manifest_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("bad.json");
    std::fs::write(&m, "[{\"check\": \"nope\"}]").unwrap();
    let o = wfl(
        &["verify", "battery", "--manifest", m.to_str().unwrap(), "--out", dir.path().to_str().unwrap()],
        &[],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cache_hits_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fiber", "max", "-g", "dih:4", "-w", "[x1,x2]", "--auts", "aut"];
    let plain = wfl(&args, &[]);
    let cache = [("WFL_CACHE_DIR", dir.path().to_str().unwrap())];
    let first = wfl(&args, &cache);
    let second = wfl(&args, &cache);
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    let lines = std::fs::read_to_string(dir.path().join("results.jsonl")).unwrap();
    assert_eq!(lines.lines().count(), 1);
    let mut no_cache = args.to_vec();
    no_cache.insert(0, "--no-cache");
    let third = wfl(&no_cache, &cache);
    assert_eq!(third.stdout, plain.stdout);
    assert!(!String::from_utf8_lossy(&third.stderr).contains("cache hit"));
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("results.jsonl"), "garbage\n").unwrap();
    let cache = [("WFL_CACHE_DIR", dir.path().to_str().unwrap())];
    let o = wfl(&["word", "mconst", "-l", "2", "-d", "1"], &cache);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("corrupt"));
}

#[test]
fn thread_count_does_not_change_output() {
    let cases: [&[&str]; 4] = [
        &["fiber", "max", "-g", "alt:4", "-w", "x1 x2 x1", "--auts", "aut"],
        &["verify", "identity-max", "-g", "q8", "-w", "[x1,x2]"],
        &["group", "series", "-g", "sym:4"],
        &["bounds", "exclude", "-w", "x1^2", "--rho", "1/3"],
    ];
    for args in cases {
        let a = wfl(args, &[("WFL_THREADS", "1")]);
        let b = wfl(args, &[("WFL_THREADS", "4")]);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn subgroup_and_series_commands() {
    let v = json_of(&wfl(&["group", "subgroups", "-g", "sym:3", "--kind", "normal"], &[]));
    assert_eq!(v["result"]["count"], "3");
    let v = json_of(&wfl(&["group", "series", "-g", "sym:4"], &[]));
    assert_eq!(v["result"]["chain_orders"], serde_json::json!(["1", "4", "12", "24"]));
    let v = json_of(&wfl(&["group", "radical", "-g", "sym:4"], &[]));
    assert_eq!(v["result"]["radical_order"], "24");
    let v = json_of(&wfl(&["group", "auts", "-g", "q8"], &[]));
    assert_eq!(v["result"]["size"], "24");
}

#[test]
fn word_commands() {
    let v = json_of(&wfl(&["word", "parse", "-w", "x2 x1 x1^-1 x3^2"], &[]));
    assert_eq!(v["result"]["word"], "x1 x2 x2");
    let v = json_of(&wfl(&["word", "variations", "-w", "[x1,x2]"], &[]));
    assert_eq!(v["result"]["count"], "16");
    assert_eq!(v["result"]["variations"].as_array().unwrap().len(), 16);
}

#[test]
fn fiber_dist_sums_to_domain() {
    let v = json_of(&wfl(&["fiber", "dist", "-g", "sym:3", "-w", "x1^2"], &[]));
    assert_eq!(v["result"]["total"], "6");
    assert_eq!(v["result"]["max"], "4");
    let o = wfl(&["fiber", "dist", "-g", "sym:3", "-w", "x1^2", "--tuple", "0,1,2"], &[]);
    assert_eq!(o.status.code(), Some(2));
}
