use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::tempdir;

fn spectra(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(args)
        .env_remove("SPECTRA_CAP_N")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn spectra");
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn construct(args: &[&str]) -> String {
    let o = spectra(&[&["construct"], args].concat(), None);
    assert_eq!(o.status.code(), Some(0));
    stdout(&o)
}

#[test]
fn polarity_graph_of_order_seven() {
    let g = json(&spectra(&["construct", "polarity-graph", "--q", "2"], None));
    assert_eq!(g["n"], 7);
    let adj = g["adj"].as_array().unwrap();
    let trace: u64 = (0..7).map(|i| adj[i][i].as_u64().unwrap()).sum();
    assert_eq!(trace, 3);
}

#[test]
fn non_prime_power_is_rejected() {
    let o = spectra(&["construct", "polarity-graph", "--q", "6"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("6 is not a prime power"));
}

#[test]
fn sidecar_next_to_output() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("g4.json");
    let o = spectra(&["construct", "polarity-graph", "--q", "4", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let side: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g4.sidecar.json")).unwrap()).unwrap();
    assert_eq!(side["q"], 4);
    assert_eq!(side["p"], 2);
    assert_eq!(side["e"], 2);
    assert_eq!(side["modulus"], serde_json::json!([1, 1, 1]));
    assert_eq!(side["absolute_points"].as_array().unwrap().len(), 5);

    let explicit = dir.path().join("meta.json");
    let o = spectra(&["construct", "polarity-graph", "--q", "3", "--sidecar", explicit.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(explicit.exists());
}

#[test]
fn cycle_and_shift() {
    let c5 = json(&spectra(&["construct", "cycle", "--n", "5"], None));
    assert_eq!(c5["n"], 5);
    let h = json(&spectra(&["construct", "shift", "--builtin", "cycle(5)", "--t", "2"], None));
    assert_eq!(h["adj"][0][0], 2);
    let p = construct(&["petersen"]);
    let shifted = spectra(&["construct", "shift", "--input", "-", "--t", "1"], Some(&p));
    let r = json(&spectra(&["certify", "--three-ev"], Some(&stdout(&shifted))));
    assert_eq!(r["pass"], true);
    let eig: Vec<&Value> = r["checks"][0]["data"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| &e["value"]["a"])
        .collect();
    assert_eq!(eig, ["4", "2", "-1"]);
}

#[test]
fn certify_three_ev_exact_radicand() {
    let g3 = construct(&["polarity-graph", "--q", "3"]);
    let o = spectra(&["certify", "--three-ev"], Some(&g3));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let eig = &r["checks"][0]["data"]["eigenvalues"];
    assert_eq!(eig[1]["value"], serde_json::json!({"a": "0", "b": "1", "rad": "3"}));
    assert_eq!(eig[2]["value"], serde_json::json!({"a": "0", "b": "-1", "rad": "3"}));
    assert!(eig[1]["value"].get("approx").is_none());

    let f = json(&spectra(&["certify", "--three-ev", "--float"], Some(&g3)));
    let approx = f["checks"][0]["data"]["eigenvalues"][1]["value"]["approx"].as_f64().unwrap();
    assert!((approx - 3f64.sqrt()).abs() < 1e-12);
}

#[test]
fn certify_failures_exit_one() {
    let c6 = construct(&["cycle", "--n", "6"]);
    let o = spectra(&["certify", "--three-ev"], Some(&c6));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["checks"][0]["detail"], "4 distinct eigenvalues");

    let p = construct(&["petersen"]);
    let o = spectra(&["certify", "--extremal"], Some(&p));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certify_plane_double_and_extremal() {
    let g2 = construct(&["polarity-graph", "--q", "2"]);
    let o = spectra(&["certify", "--plane-double", "--extremal", "--girth"], Some(&g2));
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["checks"][0]["check"], "girth");
    assert_eq!(r["checks"][0]["detail"], "girth 1");
    assert_eq!(r["checks"][1]["detail"], "all conditions hold");
    let plane = r["checks"].as_array().unwrap().iter().find(|c| c["check"] == "plane-double").unwrap();
    assert_eq!(plane["detail"], "plane of order 2 recognized");
}

#[test]
fn certify_srg_on_petersen() {
    let p = construct(&["petersen"]);
    let r = json(&spectra(&["certify", "--srg"], Some(&p)));
    assert_eq!(r["checks"][0]["data"], serde_json::json!({"n": 10, "k": 3, "lambda": 0, "mu": 1}));
}

#[test]
fn malformed_input_exits_two() {
    let o = spectra(&["certify", "--three-ev"], Some("{\"n\": 2, \"adj\": [[0,1],[0,0]]}"));
    assert_eq!(o.status.code(), Some(2));
    let o = spectra(&["certify"], Some("not a graph"));
    assert_eq!(o.status.code(), Some(2));
    let o = spectra(&["bound", "moore", "--k", "x", "--d", "2"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = spectra(&["frobnicate"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn edge_list_input_is_detected() {
    let o = spectra(&["certify", "--three-ev"], Some("5 2\n0 1 1\n1 2 1\n2 3 1\n3 4 1\n0 4 1\n"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn bound_examples() {
    let v = |args: &[&str]| json(&spectra(&[&["bound"], args].concat(), None))["value"].clone();
    assert_eq!(v(&["three-ev", "--k", "11"]), "111");
    assert_eq!(v(&["moore", "--k", "3", "--d", "2"]), "10");
    assert_eq!(v(&["bruck-ryser", "--q", "14"]), "infeasible");
    assert_eq!(v(&["lp", "--k", "4", "--tau", "sqrt(3)", "--tau", "-sqrt(3)", "--f", "1,0,1"]), "13");
    assert_eq!(v(&["harmonic", "--k", "4", "--f", "1,0,1"]), "13");
    assert_eq!(v(&["srg-identity", "--n", "10", "--k", "3", "--lambda", "0", "--mu", "1"]), "10");

    // unmet hypotheses are reported, not treated as errors
    let o = spectra(&["bound", "lp", "--k", "2", "--tau", "2", "--tau", "-2", "--f=-2,0,1"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "none");

    let known = json(&spectra(&["bound", "known", "--moore-graph", "57"], None));
    assert_eq!(known["existence"], "unknown");
}

#[test]
fn search_finds_small_cycles() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("hits.jsonl");
    let o = spectra(
        &["search", "--k", "2", "--nmax", "7", "--loops", "--multi", "--out", out.to_str().unwrap()],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let orders: Vec<u64> = text
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["n"].as_u64().unwrap())
        .collect();
    assert!(orders.contains(&4) && orders.contains(&5));
    assert!(orders.iter().all(|&n| n <= 5));
}

#[test]
fn search_respects_cap_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_spectra"))
        .args(["search", "--k", "2", "--nmax", "7"])
        .env("SPECTRA_CAP_N", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = spectra(&["search", "--k", "3", "--nmax", "11"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_resume_matches_fresh_run() {
    let dir = tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let args = ["search", "--k", "3", "--nmax", "8", "--jobs", "2", "--checkpoint", cp.to_str().unwrap()];
    let first = spectra(&args, None);
    assert_eq!(first.status.code(), Some(0));
    assert!(cp.exists());
    let resumed = spectra(&[&args[..], &["--resume"]].concat(), None);
    assert_eq!(resumed.status.code(), Some(0));
    assert_eq!(first.stdout, resumed.stdout);
    let o = spectra(&["search", "--k", "3", "--nmax", "6", "--resume"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_walks_on_c5() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("c5.json");
    std::fs::write(&path, construct(&["cycle", "--n", "5"])).unwrap();
    let o = spectra(&["verify-walks", "--input", path.to_str().unwrap(), "--imax", "6"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], true);
}

#[test]
fn export_dot_renders_loops() {
    let g2 = construct(&["polarity-graph", "--q", "2"]);
    let dot = stdout(&spectra(&["export", "--dot"], Some(&g2)));
    assert!(dot.starts_with("graph"));
    let nodes = dot.lines().filter(|l| l.trim().trim_end_matches(';').parse::<usize>().is_ok()).count();
    assert_eq!(nodes, 7);
    let loops = dot
        .lines()
        .filter_map(|l| l.trim().trim_end_matches(';').split_once(" -- "))
        .filter(|(a, b)| a.trim() == b.trim())
        .count();
    assert_eq!(loops, 3);

    let el = stdout(&spectra(&["export", "--edge-list"], Some(&g2)));
    assert!(el.starts_with("7 3\n"));
    let back = stdout(&spectra(&["export", "--json"], Some(&el)));
    assert_eq!(back, g2);
    assert_eq!(spectra(&["export"], Some(&g2)).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["construct", "polarity-graph", "--q", "9"][..],
        &["construct", "incidence-graph", "--q", "4"][..],
        &["search", "--k", "3", "--nmax", "8", "--loops", "--jobs", "3"][..],
        &["bound", "srg-identity", "--n", "7", "--k", "3", "--lambda", "0", "--mu", "2"][..],
    ] {
        let a = spectra(args, None);
        let b = spectra(args, None);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
