use std::process::{Command, Output};

use serde_json::Value;

fn cck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cck"))
        .args(args)
        .env_remove("CCK_BUDGET")
        .output()
        .expect("spawn cck")
}

fn json(args: &[&str]) -> Value {
    let out = cck(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn vec_of(v: &Value) -> Vec<i64> {
    v.as_array().unwrap().iter().map(|k| k.as_i64().unwrap()).collect()
}

const A3: [&str; 4] = ["--type", "A3", "--word", "1,2,3,2,1"];

#[test]
fn act_frozen_variable() {
    let mut args = vec!["act"];
    args.extend(A3);
    args.extend(["--program", "f3,f2,f1"]);
    let v = json(&args);
    assert_eq!(vec_of(&v["result"]), [0, 0, 1, 1, 1]);
    assert_eq!(v["trace"].as_array().unwrap().len(), 3);
}

#[test]
fn act_empty_program_echoes() {
    let v = json(&["act", "--type", "A2", "--word", "1,2,1", "--program", "", "--start", "2,-1,0"]);
    assert_eq!(vec_of(&v["result"]), [2, -1, 0]);
    assert!(v["trace"].as_array().unwrap().is_empty());
}

#[test]
fn act_peeling() {
    let v = json(&["act", "--type", "A2", "--word", "1,2,1", "--program", "emax2,emax1", "--start", "1,1,0"]);
    assert_eq!(vec_of(&v["result"]), [0, 0, 0]);
    let v = json(&["act", "--type", "A2", "--word", "1,2,1", "--program", "emax1,emax2", "--start", "1,1,0"]);
    assert_eq!(vec_of(&v["result"]), [0, 1, 0]);
}

#[test]
fn act_rejects_absent_letter() {
    let out = cck(&["act", "--type", "A3", "--word", "1,2", "--program", "f3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn graph_box() {
    let v = json(&["graph", "--type", "A2", "--word", "1,2,1", "--radius", "1"]);
    let nodes = v["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 27);
    for e in v["edges"].as_array().unwrap() {
        assert!(vec_of(&e["to"]).iter().all(|k| k.abs() <= 1));
    }
    let v0 = json(&["graph", "--type", "A2", "--word", "1,2,1", "--radius", "0"]);
    assert_eq!(v0["nodes"].as_array().unwrap().len(), 1);
    assert!(v0["edges"].as_array().unwrap().is_empty());

    let dot = cck(&["graph", "--type", "A2", "--word", "1,2,1", "--radius", "1", "--format", "dot"]);
    let dot = String::from_utf8(dot.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("x_m1_0_1"));
    assert!(dot.contains("label=\"2\""));
}

#[test]
fn membership() {
    let v = json(&["member", "binfty", "--type", "A2", "--x", "0,1,1"]);
    assert_eq!(v["member"], true);
    let v = json(&["member", "binfty", "--type", "A2", "--x", "1,0,0"]);
    assert_eq!(v["member"], false);
    let v = json(&["member", "demazure", "--type", "A2", "--x", "0,1,1", "--uw", "2,1"]);
    assert_eq!(v["member"], true);
    let v = json(&["member", "demazure", "--type", "A2", "--x", "1,1,0", "--uw", "2,1"]);
    assert_eq!(v["member"], false);
}

#[test]
fn star_epsilon() {
    let v = json(&["estar", "--type", "A2", "--word", "1,2,1", "--x", "0,1,1", "--j", "1"]);
    assert_eq!(v["eps_star"], 1);
    let v = json(&["estar", "--type", "A2", "--word", "1,2,1", "--x", "0,1,1", "--j", "2"]);
    assert_eq!(v["eps_star"], 0);
    let mut args = vec!["estar"];
    args.extend(A3);
    args.extend(["--x", "0,0,1,1,1", "--j", "2"]);
    assert_eq!(cck(&args).status.code(), Some(3));
}

#[test]
fn iso_grow_and_transport() {
    let v = json(&["iso", "grow", "--type", "A2", "--word", "1,2,1", "--to", "2,1,2", "--radius", "1"]);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["explored"], 27);
    let v = json(&["iso", "transport", "--type", "A2", "--word", "1,2,1", "--to", "2,1,2", "--x", "0,1,1"]);
    assert_eq!(vec_of(&v["result"]), [1, 1, 0]);
    let out = cck(&["iso", "transport", "--type", "A2", "--word", "1,2,1", "--to", "1,2", "--x", "0,1,1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn connectedness() {
    let v = json(&["connect", "--type", "A2", "--word", "1,2,1", "--radius", "2", "--pad", "4"]);
    assert_eq!(v["fraction"], 1.0);
    assert_eq!(v["inner_total"], 125);
    let out = cck(&["connect", "--type", "G2", "--word", "1,2,1,2,1,2", "--radius", "1", "--pad", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reached"], 567);
}

#[test]
fn hshift() {
    let v = json(&["hshift", "--type", "A2", "--x", "-1,0,2", "--tmax", "5"]);
    assert_eq!(v["found"], true);
    assert_eq!(v["t"], 1);
    assert_eq!(v["membership"]["member"], true);
}

#[test]
fn highest_weight_sizes() {
    for (ty, lam, size) in [("A2", "1,0", 3), ("A2", "1,1", 8), ("A3", "0,1,0", 6), ("B2", "0,1", 4)] {
        let v = json(&["blambda", "--type", ty, "--lambda", lam]);
        assert_eq!(v["size"], size, "{ty} {lam}");
    }
}

#[test]
fn verify_suites() {
    let v = json(&["verify", "a3-example"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"][0]["cases"], 3);
    let v = json(&["verify", "fC", "--type", "G2", "--word", "1,2,1,2,1,2"]);
    assert_eq!(v["passed"], true);
    let v = json(&["verify", "cluster-regions"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(cck(&["verify", "nosuch"]).status.code(), Some(3));
    assert_eq!(cck(&["cartan", "validate"]).status.code(), Some(3));
    assert_eq!(cck(&["cartan", "validate", "--type", "A2"]).status.code(), Some(0));
    assert_eq!(cck(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(cck(&["--help"]).status.code(), Some(0));

    let env = |k: &str, args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_cck"))
            .args(args)
            .env("CCK_BUDGET", k)
            .output()
            .unwrap()
            .status
            .code()
    };
    let g2 = ["iso", "transport", "--type", "G2", "--word", "1,2,1,2,1,2", "--to", "2,1,2,1,2,1", "--x", "2,-2,1,-1,2,-2"];
    assert_eq!(env("5", &g2), Some(4));
    assert_eq!(env("n", &["cartan", "validate", "--type", "A2"]), Some(3));
    assert_eq!(cck(&g2).status.code(), Some(0));
}

#[test]
fn cartan_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("b2.json");
    std::fs::write(&p, r#"{"labels":["a","b"],"matrix":[[2,-2],[-1,2]]}"#).unwrap();
    let path = p.to_str().unwrap();
    let v = json(&["cartan", "validate", "--cartan", path]);
    assert_eq!(v["cartan"]["symmetrizers"], serde_json::json!([1, 2]));
    let v = json(&["act", "--cartan", path, "--word", "a,b,a,b", "--program", "fb,fa"]);
    assert_eq!(vec_of(&v["result"]).iter().sum::<i64>(), 2);

    std::fs::write(&p, r#"{"labels":["a","b"],"matrix":[[2,-1],[-2,1]]}"#).unwrap();
    assert_eq!(cck(&["cartan", "validate", "--cartan", path]).status.code(), Some(3));
}

#[test]
fn deterministic_output() {
    let args = ["verify", "subcrystal", "--seed", "7", "--samples", "50"];
    let (a, b) = (cck(&args), cck(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = cck(&["verify", "subcrystal", "--seed", "8", "--samples", "50"]);
    assert_eq!(c.status.code(), Some(0));
}
