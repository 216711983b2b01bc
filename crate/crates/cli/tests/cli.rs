//! End-to-end checks of the `cutlab` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutlab"))
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cutlab-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn family_gen_and_oracle_round_trip() {
    let dir = workdir("family");
    let prefix = dir.join("clique-pair");
    run_ok(bin()
        .args(["family", "gen", "--family", "clique-pair", "--n", "12", "--k", "2", "--p", "4"])
        .arg("--out")
        .arg(&prefix));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(prefix.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(sidecar["m"], 30);
    assert_eq!(sidecar["roles"]["prefix"].as_array().unwrap().len(), 4);

    let out = run_ok(bin()
        .args(["oracle", "--sense", "min"])
        .arg("--graph")
        .arg(prefix.with_extension("graph")));
    let oracle: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(oracle["value"], 2.0);
    assert_eq!(oracle["oracles_agree"], true);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn run_consumes_an_explicit_tape() {
    let dir = workdir("run");
    let graph = dir.join("p3.graph");
    std::fs::write(&graph, "p 3 2\ne 0 1\ne 1 2\n").unwrap();
    // bits 10 = place v2 in X, v3 in Y
    let out = run_ok(bin()
        .args(["run", "--alg", "advice-optimal", "--order", "0,1,2", "--tape", "80:2"])
        .arg("--graph")
        .arg(&graph));
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["record"]["value"], 1.0);
    assert_eq!(record["record"]["advice_bits"], 2);
    assert_eq!(record["tape"]["hex"], "80");

    // generated tape reaches the optimum as well
    let out = run_ok(bin()
        .args(["run", "--alg", "advice-optimal", "--order", "2,0,1"])
        .arg("--graph")
        .arg(&graph));
    let record: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["record"]["value"], 1.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_writes_reports_and_reemits_identically() {
    let dir = workdir("sweep");
    let out_dir = dir.join("cb");
    run_ok(bin()
        .args(["sweep", "classic-bounds", "--n", "7", "--seed", "3"])
        .arg("--out")
        .arg(&out_dir));
    let rows = std::fs::read_to_string(out_dir.join("rows.csv")).unwrap();
    assert!(rows.starts_with("instance,alg,opt,"));
    assert!(rows.lines().count() > 1);

    let copy = dir.join("copy");
    run_ok(bin()
        .arg("report")
        .arg("--result")
        .arg(out_dir.join("result.json"))
        .arg("--out")
        .arg(&copy));
    let rows2 = std::fs::read_to_string(copy.join("rows.csv")).unwrap();
    assert_eq!(rows, rows2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reemission_preserves_every_float_digit() {
    // regret rows carry irrational values, so this breaks if the result
    // JSON does not round-trip doubles exactly
    let dir = workdir("reemit");
    let out_dir = dir.join("ru");
    run_ok(bin()
        .args(["sweep", "regret-upper", "--trials", "8", "--steps", "50", "--seed", "5"])
        .arg("--out")
        .arg(&out_dir));
    let copy = dir.join("copy");
    run_ok(bin()
        .arg("report")
        .arg("--result")
        .arg(out_dir.join("result.json"))
        .arg("--out")
        .arg(&copy));
    assert_eq!(
        std::fs::read_to_string(out_dir.join("rows.csv")).unwrap(),
        std::fs::read_to_string(copy.join("rows.csv")).unwrap()
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn regret_emits_trace_and_sequence() {
    let dir = workdir("regret");
    let trace = dir.join("trace.csv");
    run_ok(bin()
        .args(["regret", "--adversary", "path", "--n", "6", "--steps", "15", "--eps", "0.2"])
        .arg("--out")
        .arg(&trace));
    let csv = std::fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("t,played_value,opt_value,inst_regret,cum_regret,variation_so_far"));
    assert_eq!(csv.lines().count(), 16);
    assert!(trace.with_extension("seq.json").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn permsearch_reports_witness_orders() {
    let dir = workdir("perm");
    let graph = dir.join("star.graph");
    std::fs::write(&graph, "p 5 4\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n").unwrap();
    let out = run_ok(bin()
        .args(["permsearch", "--alg", "greedy-min", "--objective", "min"])
        .arg("--graph")
        .arg(&graph));
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(result["matches_target"], true);
    assert_eq!(result["best_value"], 1.0);
    let order = result["witness_order"].as_str().unwrap();
    assert_eq!(order.split(',').count(), 5);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn advice_command_handles_graphs_beyond_the_enumeration_cap() {
    let dir = workdir("advice");
    let prefix = dir.join("rnd");
    run_ok(bin()
        .args(["family", "gen", "--family", "gnp", "--n", "50", "--p", "0.3", "--seed", "3"])
        .arg("--out")
        .arg(&prefix));
    let out = run_ok(bin()
        .args(["advice", "--scheme", "min-degree", "--seed", "1"])
        .arg("--graph")
        .arg(prefix.with_extension("graph")));
    let result: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(result["opt_oracle"], "stoer-wagner");
    assert_eq!(result["advice_bits_consumed"], 6);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_inputs_exit_nonzero() {
    let out = bin()
        .args(["oracle", "--graph", "/nonexistent/g.graph"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let dir = workdir("bad");
    let graph = dir.join("bad.graph");
    std::fs::write(&graph, "e 0 1\n").unwrap();
    let out = bin().arg("oracle").arg("--graph").arg(&graph).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
