use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mtv_core::ir::parse_model;
use mtv_core::samples::{PUBSUB_MODEL, PUBSUB_PARTIAL_TRACE};
use tempfile::TempDir;

fn mtv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtv")).args(args).env_remove("MTV_TIMEOUT_MS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(o: &Output, key: &str) -> String {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")).map(str::to_string))
        .unwrap_or_else(|| panic!("no {key} in {}", stdout(o)))
}

fn put(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn pubsub_files(dir: &Path) -> (String, String) {
    (put(dir, "pubsub.model", PUBSUB_MODEL), put(dir, "partial.trace", PUBSUB_PARTIAL_TRACE))
}

#[test]
fn accepted_prefix_exits_zero() {
    let dir = TempDir::new().unwrap();
    let (model, trace) = pubsub_files(dir.path());
    let out = mtv(&["analyze", &model, &trace]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&out, "verdict"), "Ok");
    assert!(value(&out, "node_count").parse::<usize>().unwrap() <= 10);

    let full = mtv(&["analyze", &model, &trace, "--full", "--por", "--loc", "--loc-depth", "2", "--strategy", "bfs"]);
    assert_eq!(full.status.code(), Some(0));
}

#[test]
fn rejected_trace_exits_one() {
    let dir = TempDir::new().unwrap();
    let model = put(
        dir.path(),
        "alt.model",
        "lifelines: l1, l2, l3\nmessages: m\ninteraction: alt(strict(l1!m, l2?m), strict(l1!m, l3?m))\n",
    );
    let trace = put(dir.path(), "both.trace", "l1: l1!m\nl2: l2?m\nl3: l3?m\n");
    let out = mtv(&["analyze", &model, &trace, "--loc"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(value(&out, "verdict"), "Nok");
}

#[test]
fn zero_timeout_exits_three() {
    let dir = TempDir::new().unwrap();
    let (model, trace) = pubsub_files(dir.path());
    let out = Command::new(env!("CARGO_BIN_EXE_mtv"))
        .args(["analyze", &model, &trace])
        .env("MTV_TIMEOUT_MS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(value(&out, "verdict"), "Timeout");
}

#[test]
fn input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let (model, trace) = pubsub_files(dir.path());
    assert_eq!(mtv(&["analyze", "missing.model", &trace]).status.code(), Some(2));

    let bad = put(dir.path(), "bad.model", "lifelines: a\nmessages: m\ninteraction: seq(a!m,\n");
    let out = mtv(&["analyze", &bad, &trace]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.model:"), "{err}");

    let bad_trace = put(dir.path(), "bad.trace", "lp: lp!pub\nzz: zz!pub\n");
    let out = mtv(&["analyze", &model, &bad_trace]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.trace:2"));

    assert_eq!(mtv(&["generate", "--count", "1"]).status.code(), Some(2));
    assert_eq!(mtv(&["analyze", &model, &trace, "--loc-depth", "deep"]).status.code(), Some(2));
}

#[test]
fn graph_exports() {
    let dir = TempDir::new().unwrap();
    let (model, trace) = pubsub_files(dir.path());
    let dot = dir.path().join("g.dot");
    let jsonl = dir.path().join("g.jsonl");
    let out = mtv(&[
        "analyze",
        &model,
        &trace,
        "--full",
        "--dot",
        dot.to_str().unwrap(),
        "--jsonl",
        jsonl.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&out, "node_count"), "10");
    let dot = fs::read_to_string(dot).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" [label=\"").count() - dot.matches(" -> ").count(), 10);
    assert!(!fs::read_to_string(jsonl).unwrap().is_empty());
}

#[test]
fn sat_instances_decide_satisfiability() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("enc");
    let sat = put(dir.path(), "fig.cnf", "p cnf 3 4\n-1 -2 -3 0\n-1 2 3 0\n1 -1 2 0\n2 3 -3 0\n");
    let out = mtv(&["sat", "--dimacs", &sat, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let code = mtv(&["analyze", &value(&out, "model"), &value(&out, "trace")]).status.code();
    assert_eq!(code, Some(0));

    let mut unsat = String::from("p cnf 3 8\n");
    for bits in 0..8 {
        let lits: Vec<String> = (1..=3).map(|v| if bits >> (v - 1) & 1 == 1 { format!("-{v}") } else { v.to_string() }).collect();
        unsat.push_str(&format!("{} 0\n", lits.join(" ")));
    }
    let unsat = put(dir.path(), "all.cnf", &unsat);
    let out = mtv(&["sat", "--dimacs", &unsat, "--out", out_dir.to_str().unwrap()]);
    let code = mtv(&["analyze", &value(&out, "model"), &value(&out, "trace")]).status.code();
    assert_eq!(code, Some(1));

    let missing_out = mtv(&["sat", "--dimacs", &sat]);
    assert_eq!(missing_out.status.code(), Some(2));
}

#[test]
fn generate_is_deterministic_and_meets_minima() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = mtv(&["generate", "--preset", "paper", "--count", "3", "--seed", "5", "--traces", "2", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for k in 0..3 {
        let name = format!("i{k}.model");
        let text = fs::read_to_string(a.join(&name)).unwrap();
        assert_eq!(text, fs::read_to_string(b.join(&name)).unwrap());
        let (_, i) = parse_model(&text).unwrap();
        assert!(i.depth() >= 6 && i.symbol_count() >= 20);
    }
    assert!(a.join("i0_t0.trace").exists());
}

#[test]
fn mutate_writes_a_trace() {
    let dir = TempDir::new().unwrap();
    let (model, trace) = pubsub_files(dir.path());
    let out_dir = dir.path().join("m");
    let out = mtv(&["mutate", &model, &trace, "--kind", "noise", "--seed", "1", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&out, "len"), "3");
    assert!(Path::new(&value(&out, "trace")).exists());

    let out = mtv(&["mutate", &model, &trace, "--kind", "swap-comp", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bench_writes_csv() {
    let dir = TempDir::new().unwrap();
    let cfg = put(
        dir.path(),
        "bench.toml",
        "seed = 1\ninteractions = 1\ntraces_per_kind = 2\nmax_trace_len = 6\ntimeout_ms = 1000\n",
    );
    let out_dir = dir.path().join("out");
    let out = mtv(&["bench", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert!(csv.starts_with("interaction_id,trace_id,trace_kind"));
    assert_eq!(csv.lines().count() - 1, value(&out, "rows").parse::<usize>().unwrap());

    let bad = put(dir.path(), "bad.toml", "interactions = \"many\"\n");
    assert_eq!(mtv(&["bench", &bad, "--out", out_dir.to_str().unwrap()]).status.code(), Some(2));
}
