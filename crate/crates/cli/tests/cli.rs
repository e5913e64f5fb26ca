use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn qwom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwom")).args(args).output().unwrap()
}

fn qwom_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qwom"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn zoo_file(dir: &Path, id: &str) -> String {
    let path = dir.join(format!("{id}.qm"));
    let o = qwom(&["zoo", id, "-o", path.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    path.to_str().unwrap().to_string()
}

#[test]
fn zoo_pipes_into_validate() {
    let zoo = qwom(&["zoo", "twin"]);
    assert!(zoo.status.success());
    let v = qwom_stdin(&["validate", "-"], &zoo.stdout);
    assert_eq!(v.status.code(), Some(0), "{v:?}");
}

#[test]
fn run_prints_nine_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let twin = zoo_file(dir.path(), "twin");
    let o = qwom(&["run", &twin, "abcab"]);
    assert!(o.status.success());
    assert!(stdout(&o).lines().any(|l| l == "accept_prob 1.000000000"), "{}", stdout(&o));
    let o = qwom(&["run", &twin, "abcba", "--trace"]);
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "accept_prob 0.500000000"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("step ")).count(), 7);
}

#[test]
fn sweep_verdicts_match_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let twin = zoo_file(dir.path(), "twin");
    let csv = dir.path().join("twin.csv");
    let args = [
        "sweep",
        &twin,
        "--all-upto",
        "5",
        "--alphabet",
        "a,b,c",
        "--criterion",
        "one-sided-neg:0.5",
        "--oracle",
        "twin",
        "-o",
        csv.to_str().unwrap(),
    ];
    let o = qwom(&args);
    assert!(o.status.success(), "{o:?}");
    let first = fs::read_to_string(&csv).unwrap();
    let mut lines = first.lines();
    assert_eq!(lines.next(), Some("input,length,accept_prob,reject_prob,oracle,verdict,max_wom_cells,branches"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 364);
    for r in &rows {
        assert_eq!(r[4], r[5], "{r:?}");
    }
    let keys: Vec<(usize, &str)> = rows.iter().map(|r| (r[1].parse().unwrap(), r[0])).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));

    assert!(qwom(&args).status.success());
    assert_eq!(fs::read_to_string(&csv).unwrap(), first);
}

#[test]
fn corpus_sweep_of_a_classical_machine() {
    let dir = tempfile::tempdir().unwrap();
    let eq1 = zoo_file(dir.path(), "eq-1");
    let corpus = dir.path().join("words.txt");
    fs::write(&corpus, "# words\nab\nEPS\naab  # two a\n").unwrap();
    let o = qwom(&["sweep", &eq1, "--corpus", corpus.to_str().unwrap(), "--criterion", "strict:1/2"]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows, [",0,1.000000000,0.000000000,,member,0,1", "ab,2,1.000000000,0.000000000,,member,0,1", "aab,3,0.000000000,1.000000000,,nonmember,0,1"]);
}

#[test]
fn construct_then_run() {
    let dir = tempfile::tempdir().unwrap();
    let eq1 = zoo_file(dir.path(), "eq-1");
    let out = dir.path().join("ioc.qm");
    let o = qwom(&["construct", "d1bca-ioc:3", &eq1, "-o", out.to_str().unwrap()]);
    assert!(o.status.success(), "{o:?}");
    let o = qwom(&["run", out.to_str().unwrap(), "aab"]);
    assert!(stdout(&o).contains("accept_prob 0.333333333"), "{}", stdout(&o));
    assert_eq!(qwom(&["validate", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn oracle_verdicts() {
    assert_eq!(stdout(&qwom(&["oracle", "rev", "abcba"])), "member\n");
    assert_eq!(stdout(&qwom(&["oracle", "nh", "aabab"])), "nonmember\n");
}

#[test]
fn exit_codes() {
    assert_eq!(qwom(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qwom(&["run"]).status.code(), Some(2));
    assert_eq!(qwom(&["sweep", "x.qm", "--criterion", "sideways:1"]).status.code(), Some(2));
    assert_eq!(qwom(&["run", "/nonexistent.qm", "a"]).status.code(), Some(1));
    assert_eq!(qwom(&["construct", "scale:1", "/nonexistent.qm", "-o", "/dev/null"]).status.code(), Some(1));
    assert_eq!(qwom(&["zoo", "no-such-language"]).status.code(), Some(1));

    let broken = b"machine quantum\ninput a\nstates q1\nstart q1\naccept\nregister w1\ntrans q1 a 1/2 q1 - w1\n";
    let o = qwom_stdin(&["validate", "-"], broken);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row norm 0.25 ≠ 1"), "{o:?}");
}

#[test]
fn conservation_failure_ends_the_csv_with_a_marker() {
    let dir = tempfile::tempdir().unwrap();
    let rb = zoo_file(dir.path(), "rev-bins");
    let corpus = dir.path().join("words.txt");
    fs::write(&corpus, "a0a1a01a11a101a101a011a111a\n").unwrap();
    let o = qwom(&["sweep", &rb, "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().last().unwrap().starts_with("# error:"), "{}", stdout(&o));
}
