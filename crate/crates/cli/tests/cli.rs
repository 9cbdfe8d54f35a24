use std::process::{Command, Output};

fn markov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_markov")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = markov(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn invariants_of_integers() {
    let v = json(&["invariants", "Z"]);
    assert_eq!(v["w_d"], "w");
    assert_eq!(v["r_d"], "1");
    assert_eq!(v["flags"]["w_divisible"], true);
    assert_eq!(v["flags"]["strongly_unbounded"], false);
    assert_eq!(v["flags"]["m_group"], false);
}

#[test]
fn decide_text_shows_witness() {
    let o = markov(&["decide", "m-group", "Z(4)^5 + Z(2)^c"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "false (witness m=2, |2G|=32)");
    let o = markov(&["decide", "connected-topology", "Z(2)^c"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn plan_of_bounded_m_group_is_a_single_leaf() {
    let v = json(&["plan", "Z(2)^c"]);
    assert_eq!(v["outcome"], "certificate");
    assert_eq!(v["root"]["leaf"], "kirku_topology");
    assert!(v["root"]["checks"].as_array().unwrap().iter().all(|c| c["result"] == true));
}

#[test]
fn plan_refuses_non_m_groups() {
    let v = json(&["plan", "Z + Z(2)^c"]);
    assert_eq!(v["outcome"], "refusal");
    assert_eq!(v["size"], "w");
}

#[test]
fn exit_codes() {
    assert_eq!(markov(&["invariants", "Z(2"]).status.code(), Some(3));
    assert_eq!(markov(&["invariants", "Z(1)"]).status.code(), Some(3));
    assert_eq!(markov(&["decompose", "sigma", "Z"]).status.code(), Some(2));
    assert_eq!(markov(&["decide", "sigma-homogeneous", "Z^c", "--sigma", "3"]).status.code(), Some(2));
    // c+ against 2^c has no decided order
    assert_eq!(markov(&["decide", "w-divisible", "Z^c+ + Z(2)^2^c"]).status.code(), Some(2));
    assert_eq!(markov(&["oracle-check", "Z"]).status.code(), Some(2));
    assert_eq!(markov(&["hm", "metric", "--base", "Z/1"]).status.code(), Some(3));
    assert_eq!(markov(&["decide", "r-divisible", "Z(2)^w"]).status.code(), Some(0));
}

#[test]
fn json_errors_carry_the_exit_code() {
    let o = markov(&["--json", "invariants", "Z("]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["exit_code"], 3);
}

#[test]
fn seeded_output_is_byte_identical() {
    for args in [
        ["--seed", "7", "--json", "hm", "ball-path"],
        ["--seed", "7", "--json", "hm", "density"],
        ["--seed", "7", "--json", "hm", "metric"],
        ["--seed", "7", "--json", "hm", "trace"],
    ] {
        let a = markov(&args);
        let b = markov(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = markov(&["--json", "plan", "Z(2)^5 + Z(4)^2^c + Z^c"]);
    let b = markov(&["--json", "plan", "Z(2)^5 + Z(4)^2^c + Z^c"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(
        markov(&["--seed", "1", "--json", "hm", "trace"]).stdout,
        markov(&["--seed", "2", "--json", "hm", "trace"]).stdout
    );
}

#[test]
fn decompositions() {
    let v = json(&["decompose", "homogeneous", "Z(2)^5 + Z(4)^2^c + Z^c"]);
    assert_eq!(v["N"]["terms"][0]["block"], "Z(2^2)");
    let o = markov(&["decompose", "finite-rank", "Z^3 + Q + Z(3)^2 + Z(5^2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r_d = "));
    let v = json(&["decompose", "hm", "Z(2)^5"]);
    assert_eq!(v["HM"]["terms"][0]["mult"], "c");
}

#[test]
fn oracle_check_agrees() {
    let v = json(&["oracle-check", "Z(8) + Z(9) + Z(2)", "--max-m", "12"]);
    assert_eq!(v["agree"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
}

#[test]
fn hm_scenarios() {
    let v = json(&["--seed", "3", "hm", "ball-path", "--base", "Z/2xZ/3", "--eps", "1/3"]);
    assert_eq!(v["report"]["pass"], true);
    let v = json(&["hm", "density", "--n", "10", "--eps", "1/10"]);
    assert_eq!(v["report"]["within_epsilon"], true);
    assert_eq!(v["report"]["bound"], "1/20");
    let v = json(&["hm", "metric", "--base", "Q/Z", "--samples", "30"]);
    assert!(v["violations"].as_array().unwrap().is_empty());

    let dir = std::env::temp_dir().join(format!("markov-trace-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.csv");
    let o = markov(&["hm", "trace", "--samples", "8", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("s,mu\n0,0\n"));
    assert_eq!(csv.lines().count(), 10);
    std::fs::remove_dir_all(&dir).unwrap();
}
