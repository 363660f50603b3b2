// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

use hlsmc::benchgen::{gen, write_bench, BenchSpec};

fn hlsmc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlsmc")).args(args).current_dir(dir).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bench(dir: &Path, spec: BenchSpec) -> String {
    let b = gen(&spec).unwrap();
    write_bench(dir, &b).unwrap();
    b.name
}

#[test]
fn prove_bounded_counter_exits_one_with_replayable_trace() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let name = bench(d, BenchSpec::BoundedCounter { trip: 200 });
    let model = format!("{name}/model.aag");
    let manifest = format!("{name}/manifest.json");
    let args = [
        "prove",
        &model,
        "--manifest",
        &manifest,
        "--target",
        "ap_done_bad",
        "--nh",
        "10",
        "--t0",
        "1",
        "--alpha",
        "2",
        "--th",
        "10",
        "--trace",
        "trace.txt",
        "--report",
        "report.json",
    ];
    let o = hlsmc(&args, d);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    let trace = std::fs::read_to_string(d.join("trace.txt")).unwrap();
    assert!(trace.starts_with("# depth "));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "Counterexample");
    assert_eq!(report["config"]["nh"], 10);

    let o = hlsmc(&["pdr", &model, "--target", "ap_done_bad", "--replay", "trace.txt"], d);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("step 202"), "{}", stdout(&o));
}

#[test]
fn constant_false_pdr_proves_with_empty_invariant() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("c.aag"), "aag 0 0 0 1 0\n0\n").unwrap();
    let o = hlsmc(&["pdr", "c.aag", "--target", "o0", "--emit-invariant", "inv.txt"], d);
    assert_eq!(code(&o), 0);
    assert_eq!(std::fs::read_to_string(d.join("inv.txt")).unwrap(), "");
}

#[test]
fn fifo_lists_four_helpers() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let name = bench(d, BenchSpec::Fifo { depth: 8, pops: true });
    let o = hlsmc(
        &["helpers", &format!("{name}/model.aag"), "--manifest", &format!("{name}/manifest.json"), "--emit-dir", "mon"],
        d,
    );
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l.starts_with("Fifo")));
    assert_eq!(std::fs::read_dir(d.join("mon")).unwrap().count(), 4);
}

#[test]
fn checkpoint_and_cti_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let name = bench(d, BenchSpec::BoundedCounter { trip: 200 });
    let model = format!("{name}/model.aag");
    let o = hlsmc(&["pdr", &model, "--timeout", "0", "--ctis", "ctis.json", "--checkpoint-out", "ckp.json"], d);
    assert_eq!(code(&o), 2);
    let o = hlsmc(&["rank", &model, "--manifest", &format!("{name}/manifest.json"), "--ctis", "ctis.json"], d);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with("LoopBound:loop"), "{}", stdout(&o));
    let o = hlsmc(&["pdr", &model, "--checkpoint", "ckp.json"], d);
    assert_eq!(code(&o), 1);
}

#[test]
fn sideload_file_is_validated() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let name = bench(d, BenchSpec::Fifo { depth: 4, pops: true });
    let model = format!("{name}/model.aag");
    // holds at reset and after one step vs. violated at reset
    std::fs::write(d.join("cl.txt"), "-q_fifo_mOutPtr[2]\nq_fifo_mOutPtr[0]\n").unwrap();
    let o = hlsmc(&["pdr", &model, "--sideload", "cl.txt"], d);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("1 accepted, 1 rejected"), "{}", stdout(&o));
}

#[test]
fn oracle_and_bench() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let o = hlsmc(&["bench", "out", "--families"], d);
    assert_eq!(code(&o), 0);
    assert!(d.join("out/suite.json").exists());
    let o = hlsmc(&["oracle", "out/fifo_8/model.aag", "--trace", "t.txt"], d);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("depth 8"));
    let o = hlsmc(&["oracle", "out/function_chain_2/model.aag"], d);
    assert_eq!(code(&o), 0);
}

#[test]
fn errors_exit_above_two() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(&hlsmc(&["pdr", "missing.aag"], d)), 3);
    std::fs::write(d.join("bad.aag"), "aag 1 0 0 1\n").unwrap();
    assert_eq!(code(&hlsmc(&["oracle", "bad.aag"], d)), 3);
    std::fs::write(d.join("c.aag"), "aag 0 0 0 1 0\n0\n").unwrap();
    assert_eq!(code(&hlsmc(&["pdr", "c.aag", "--target", "nope"], d)), 3);
    assert_eq!(code(&hlsmc(&["prove", "c.aag", "--alpha", "1"], d)), 3);
}
