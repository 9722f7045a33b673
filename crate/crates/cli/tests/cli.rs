use std::io::{BufRead, BufReader};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_textclass"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn oracle_classifies_the_sample() {
    let out = run(&[
        "oracle",
        "classify",
        "--model",
        data("lr.json").to_str().unwrap(),
        "--text-file",
        data("message.txt").to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "class 1");
}

#[test]
fn accuracy_hook_agrees_on_the_corpus() {
    let out = run(&[
        "accuracy",
        "--model",
        data("ada.json").to_str().unwrap(),
        "--labeled",
        data("corpus.tsv").to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("label agreement 50/50"));
}

#[test]
fn bench_prints_csv() {
    let out = run(&["bench", "--jobs", "2", "--model", data("lr.json").to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "phase,mean_s,std_s,rounds,bytes");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("total,"));
}

#[test]
fn deal_rejects_a_short_seed() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let out = run(&[
        "deal",
        "--n",
        "4",
        "--model",
        "lr",
        "--seed",
        "abcd",
        "--out-alice",
        a.to_str().unwrap(),
        "--out-bob",
        b.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(!a.exists());
}

#[test]
fn alice_and_bob_over_tcp() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("alice.bin"), dir.path().join("bob.bin"));
    let out = run(&[
        "deal",
        "--model-file",
        data("lr.json").to_str().unwrap(),
        "--seed",
        &"07".repeat(32),
        "--out-alice",
        a.to_str().unwrap(),
        "--out-bob",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let mut bob = bin()
        .args(["bob", "serve", "--model", data("lr.json").to_str().unwrap()])
        .args([
            "--listen",
            "127.0.0.1:0",
            "--bundle",
            b.to_str().unwrap(),
            "--disclose",
            "to-both",
        ])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut err = BufReader::new(bob.stderr.take().unwrap());
    let mut line = String::new();
    err.read_line(&mut line).unwrap();
    let addr = line
        .trim()
        .strip_prefix("listening on ")
        .expect("listen address")
        .to_string();

    let alice = run(&[
        "alice",
        "classify",
        "--text-file",
        data("message.txt").to_str().unwrap(),
        "--connect",
        &addr,
        "--bundle",
        a.to_str().unwrap(),
        "--disclose",
        "to-both",
    ]);
    assert!(alice.status.success(), "{}", String::from_utf8_lossy(&alice.stderr));
    assert_eq!(stdout(&alice).trim(), "class 1");
    let bob = bob.wait_with_output().unwrap();
    assert!(bob.status.success());
    assert_eq!(stdout(&bob).trim(), "class 1");
}
