use std::process::{Command, Output};

fn sushch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sushch")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn build_prints_parameters() {
    let o = sushch(&["--p", "3", "--order", "lex", "build"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "states=20 t=3 u=011011011 v=100121112");
}

#[test]
fn build_writes_json_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lex");
    let o = sushch(&["build", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let machine: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("automaton.json")).unwrap()).unwrap();
    assert_eq!(machine["p"], 3);
    assert_eq!(machine["states"].as_array().unwrap().len(), 20);
    let dot = std::fs::read_to_string(out.join("automaton.dot")).unwrap();
    assert!(dot.starts_with("digraph"));
}

#[test]
fn build_dot_is_balanced() {
    let o = sushch(&["build", "--format", "dot"]);
    assert_eq!(o.status.code(), Some(0));
    let dot = stdout(&o);
    assert!(dot.trim_start().starts_with("digraph A_uv {"));
    assert!(dot.trim_end().ends_with('}'));
    assert_eq!(dot.matches('{').count(), dot.matches('}').count());
    assert_eq!(dot.matches('"').count() % 2, 0);
    // one node line per state
    assert_eq!(
        dot.lines().filter(|l| l.trim_start().starts_with('s') && l.contains("[label=") && !l.contains("->")).count(),
        20
    );
}

#[test]
fn order_file_with_duplicate_pair_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.json");
    std::fs::write(&path, r#"{"p":3,"pairs":[[0,0],[0,1],[0,1],[1,0],[1,1],[1,2],[2,0],[2,1],[2,2]]}"#).unwrap();
    let o = sushch(&["--order", path.to_str().unwrap(), "build"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("pair #3"), "{err}");
}

#[test]
fn order_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("swapped.json");
    std::fs::write(&path, include_str!("../../core/data/lex-swapped-p3.json")).unwrap();
    let o = sushch(&["--order", path.to_str().unwrap(), "build"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("states=26 t=9 "));
    let o = sushch(&["--p", "5", "--order", path.to_str().unwrap(), "build"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_prime_is_an_input_error() {
    assert_eq!(sushch(&["--p", "4", "build"]).status.code(), Some(2));
    assert_eq!(sushch(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(sushch(&["growth", "--group", "nope"]).status.code(), Some(2));
    assert_eq!(sushch(&["verify", "--depth", "20"]).status.code(), Some(2));
}

#[test]
fn verify_abelian_passes() {
    let o = sushch(&["--order", "lex", "verify", "--suite", "abelian"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["pass"], true);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["suite"], "abelian");
        assert!(!c["reference"].as_str().unwrap().is_empty());
    }
}

#[test]
fn verify_infinite_order_prints_witness() {
    let o = sushch(&["verify", "--suite", "infinite-order"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("q1·q2·q3·σ^2"), "{out}");
    assert!(out.contains("q1·q3·σ^1"), "{out}");
}

#[test]
fn verify_all_passes_for_both_bundled_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = sushch(&["verify", "--suite", "all", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(r["pass"], true);
    let checks = r["checks"].as_array().unwrap();
    for order in ["lex", "lex-swapped"] {
        for suite in ["abelian", "orders", "orbit-tree", "branch", "ggroup", "infinite-order", "tableau-agreement"] {
            assert!(checks.iter().any(|c| c["order"] == order && c["suite"] == suite), "{order} {suite}");
        }
    }
}

#[test]
fn verify_is_deterministic() {
    let a = sushch(&["verify", "--suite", "tableau-agreement", "--samples", "20"]);
    let b = sushch(&["verify", "--suite", "tableau-agreement", "--samples", "20"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn growth_of_h() {
    let o = sushch(&["growth", "--group", "H", "--radius", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let gamma: Vec<u64> = r["gamma"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(gamma.len(), 6);
    assert_eq!(&gamma[..2], &[1, 7]);
    assert!(gamma.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(r["partial"], false);
}

#[test]
fn growth_radius_zero() {
    let r = json(&sushch(&["growth", "--group", "G_lambda", "--radius", "0"]));
    assert_eq!(r["gamma"], serde_json::json!([1]));
}

#[test]
fn growth_csv_with_torsion() {
    let o = sushch(&["growth", "--radius", "2", "--torsion", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,gamma,pi\n0,1,1\n1,5,3\n2,13,2187\n");
}

#[test]
fn growth_exponents_only() {
    let r = json(&sushch(&["growth", "--exponents-only"]));
    assert!((r["alpha"].as_f64().unwrap() - 0.6131).abs() < 1e-4);
    let text = stdout(&sushch(&["growth", "--exponents-only", "--format", "text"]));
    assert!(text.contains("alpha=6.13147192765e-1"), "{text}");
}

#[test]
fn growth_budget_gives_partial_report() {
    let o = sushch(&["growth", "--radius", "30", "--max-forms", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr.clone()).unwrap().contains("warning"));
    let r = json(&o);
    assert_eq!(r["partial"], true);
    assert!(r["radius"].as_u64().unwrap() < 30);
}

#[test]
fn budget_env_var_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_sushch"))
        .args(["growth", "--group", "K", "--radius", "40"])
        .env("SUSHCH_BUDGET_SECS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["partial"], true);
}
