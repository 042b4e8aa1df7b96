use std::path::PathBuf;

use clap::Parser;

use cstar_corr::cli::{run, Cli, EXIT_BUDGET, EXIT_FAILED_CHECK, EXIT_PARSE, EXIT_PASS, EXIT_VALIDATION};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (String, i32) {
    let mut argv = vec!["cstar-corr"];
    argv.extend_from_slice(args);
    let out = run(&Cli::parse_from(argv));
    (out.output, out.code)
}

#[test]
fn ktheory_of_disc_and_loop() {
    let (out, code) = cli(&["ktheory", &data("m1.json")]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("K0 = Z, K1 = 0"), "{out}");
    let (out, _) = cli(&["ktheory", &data("loop.json")]);
    assert!(out.starts_with("K0 = Z, K1 = Z"), "{out}");
    let (out, _) = cli(&["ktheory", &data("odd_sphere_2.json")]);
    assert!(out.starts_with("K0 = Z, K1 = Z"), "{out}");
}

#[test]
fn ktheory_json_is_one_line() {
    let (out, code) = cli(&["--format", "json", "ktheory", &data("m1.json")]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["k0"], "Z");
    assert_eq!(v["k1"], "0");
}

#[test]
fn labelled_check_reports_weak_resolving_only() {
    let (out, code) = cli(&["labelled-check", &data("e2.json")]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert!(out.contains("not left-resolving; weakly left-resolving: true"), "{out}");
    assert!(out.contains("w_1 receives two edges labelled h"), "{out}");
}

#[test]
fn labelled_budget_is_enforced() {
    let (_, code) = cli(&["--budget", "3", "labelled-check", &data("e2.json")]);
    assert_eq!(code, EXIT_BUDGET);
}

#[test]
fn hilbert_embedding_fails_c4() {
    let (out, code) = cli(&["corr-check", &data("hilbert_embedding.json")]);
    assert_eq!(code, EXIT_FAILED_CHECK);
    assert!(out.contains("(C4): FAIL"), "{out}");
    assert!(out.contains("(C3): pass"), "{out}");
}

#[test]
fn verify_sphere_passes_at_small_rank() {
    let (out, code) = cli(&["verify-sphere", "--n", "1", "--trunc", "3"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let (out, code) = cli(&["--jobs", "2", "--format", "json", "verify-sphere", "--n", "2", "--trunc", "3"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.lines().all(|l| serde_json::from_str::<serde_json::Value>(l).is_ok()));
}

#[test]
fn obstruction_sweep_exits_with_failed_check() {
    let (out, code) = cli(&["obstruction", "--max-vertices", "5"]);
    assert_eq!(code, EXIT_FAILED_CHECK);
    assert!(out.starts_with("74 counterexamples"), "{out}");
}

#[test]
fn error_exit_codes() {
    let (_, code) = cli(&["ktheory", "/nonexistent/graph.json"]);
    assert_ne!(code, EXIT_PASS);
    let bad = std::env::temp_dir().join("cstar_corr_bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let (_, code) = cli(&["ktheory", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    std::fs::write(&bad, r#"{"vertices":["a"],"edges":[{"name":"e","src":"a","dst":"b"}]}"#).unwrap();
    let (_, code) = cli(&["ktheory", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    let (_, code) = cli(&["verify-sphere", "--n", "0"]);
    assert_eq!(code, EXIT_VALIDATION);
}

#[test]
fn export_round_trips_through_ktheory() {
    let (out, code) = cli(&["export", "disc-graph", "--n", "3"]);
    assert_eq!(code, EXIT_PASS);
    let path = std::env::temp_dir().join("cstar_corr_m3.json");
    std::fs::write(&path, out).unwrap();
    let (out, _) = cli(&["ktheory", path.to_str().unwrap()]);
    assert!(out.starts_with("K0 = Z, K1 = 0"), "{out}");
}
