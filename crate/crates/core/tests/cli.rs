use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn hrlz() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hrlz"));
    cmd.env_remove("HRLZ_SEED");
    cmd
}

fn run(args: &[&str], dir: &Path) -> Output {
    hrlz().args(args).current_dir(dir).output().unwrap()
}

const FASTA: &[u8] = b">chr1 first\nacgtacgtacgtttgacca\n>chr2\nacgtacgtacgattgacca\n>chr3\nttgaccaacgtacgtacgt\n";

#[test]
fn fasta_round_trip_for_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.fa"), FASTA).unwrap();
    for mode in [&["--mode", "rlz", "--reference", "2"][..], &["--mode", "opt-hrlz"], &["--mode", "approx-hrlz", "--k", "4"]] {
        let mut args = vec!["compress"];
        args.extend_from_slice(mode);
        args.extend(["in.fa", "out.hrlz"]);
        let out = run(&args, dir.path());
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let summary = String::from_utf8(out.stdout).unwrap();
        assert!(summary.starts_with(&format!("mode={} sequences=3 ", mode[1])), "{summary}");

        let out = run(&["decompress", "out.hrlz", "back.fa"], dir.path());
        assert!(out.status.success());
        assert_eq!(std::fs::read(dir.path().join("back.fa")).unwrap(), FASTA);
    }
}

#[test]
fn lines_through_stdin_and_stdout() {
    let input = b"abracadabra\nabracadabrx\n\ncadabra";
    let mut child = hrlz()
        .args(["compress", "--mode", "opt-hrlz", "--format", "lines", "-", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert!(out.stdout.starts_with(b"HRLZ"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sequences=4"));

    let mut child = hrlz()
        .args(["decompress", "-", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&out.stdout).unwrap();
    let back = child.wait_with_output().unwrap();
    assert!(back.status.success());
    assert_eq!(back.stdout, input);
}

#[test]
fn stats_of_single_sequence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("one.fa"), b">only\nacgt\n").unwrap();
    assert!(run(&["compress", "--mode", "opt-hrlz", "one.fa", "one.hrlz"], dir.path()).status.success());
    let out = run(&["stats", "--nodes", "one.hrlz"], dir.path());
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "mode,sequences,phrases,max_depth,avg_depth\nhrlz,1,0,0,0.000000\nnode,parent,phrases,depth\n0,-1,0,0\n"
    );
}

#[test]
fn stats_of_rlz_star() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.fa"), FASTA).unwrap();
    assert!(run(&["compress", "--mode", "rlz", "--reference", "1", "in.fa", "a"], dir.path()).status.success());
    let out = String::from_utf8(run(&["stats", "--nodes", "a"], dir.path()).stdout).unwrap();
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[1].starts_with("rlz,3,"));
    assert!(lines[1].ends_with(",1,0.666667"));
    assert_eq!(lines[3], "0,-1,0,0");
    assert!(lines[4].starts_with("1,0,"));
    assert!(lines[5].starts_with("2,0,"));
}

#[test]
fn seed_from_environment_matches_flag() {
    let dir = tempfile::tempdir().unwrap();
    let text: String = (0..12).map(|i| format!("ggatccaagtcc{}tacgatcagtt\n", "a".repeat(i % 4))).collect();
    std::fs::write(dir.path().join("in.txt"), text).unwrap();
    let base = ["compress", "--mode", "approx-hrlz", "--format", "lines", "--k", "4", "in.txt"];

    let mut args = base.to_vec();
    args.extend(["--seed", "99", "flag.hrlz"]);
    assert!(run(&args, dir.path()).status.success());

    let mut args = base.to_vec();
    args.push("env.hrlz");
    let out = hrlz().args(&args).env("HRLZ_SEED", "99").current_dir(dir.path()).output().unwrap();
    assert!(out.status.success());

    let read = |f: &str| std::fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("flag.hrlz"), read("env.hrlz"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.fa"), FASTA).unwrap();
    std::fs::write(dir.path().join("bad.fa"), b"acgt\n").unwrap();
    std::fs::write(dir.path().join("junk"), b"not an archive").unwrap();
    let code = |args: &[&str]| run(args, dir.path()).status.code();

    assert_eq!(code(&["compress", "--mode", "rlz", "in.fa", "o"]), Some(2));
    assert_eq!(code(&["compress", "--mode", "rlz", "--reference", "0", "in.fa", "o"]), Some(2));
    assert_eq!(code(&["compress", "--mode", "opt-hrlz", "--reference", "1", "in.fa", "o"]), Some(2));
    assert_eq!(code(&["compress", "--mode", "fast", "in.fa", "o"]), Some(2));
    assert_eq!(code(&["compress", "--mode", "approx-hrlz", "--k", "0", "in.fa", "o"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));

    assert_eq!(code(&["compress", "--mode", "rlz", "--reference", "4", "in.fa", "o"]), Some(1));
    assert_eq!(code(&["compress", "--mode", "opt-hrlz", "bad.fa", "o"]), Some(1));
    assert_eq!(code(&["compress", "--mode", "opt-hrlz", "missing.fa", "o"]), Some(1));
    assert_eq!(code(&["decompress", "junk", "o"]), Some(1));
    assert_eq!(code(&["stats", "junk"]), Some(1));
}

#[test]
fn edge_and_tree_dumps() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("in.fa"), FASTA).unwrap();
    let out = run(
        &["compress", "--mode", "opt-hrlz", "--dump-edges", "e.csv", "--dump-tree", "t.txt", "in.fa", "o"],
        dir.path(),
    );
    assert!(out.status.success());

    let edges = std::fs::read_to_string(dir.path().join("e.csv")).unwrap();
    let mut lines = edges.lines();
    assert_eq!(lines.next(), Some("src,dst,weight"));
    assert_eq!(lines.count(), 6);

    let tree = std::fs::read_to_string(dir.path().join("t.txt")).unwrap();
    let rows: Vec<Vec<i64>> = tree
        .lines()
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows.iter().filter(|r| r[1] == -1).count(), 1);
    let stats = String::from_utf8(run(&["stats", "o"], dir.path()).stdout).unwrap();
    let total: i64 = rows.iter().map(|r| r[2]).sum();
    assert!(stats.lines().nth(1).unwrap().starts_with(&format!("hrlz,3,{total},")));
}
