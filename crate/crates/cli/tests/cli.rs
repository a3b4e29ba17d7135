use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hyperfocus"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn text(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const FOUR_ARC: &str = r#"{"q":32,"modulus":"0x25","points":[[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#;

#[test]
fn odd_k_is_a_usage_error() {
    assert_eq!(run(&["search", "--k", "13"], "").status.code(), Some(64));
    assert_eq!(run(&["search"], "").status.code(), Some(64));
    assert_eq!(run(&["search", "--k", "12", "--s", "7"], "").status.code(), Some(64));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}

#[test]
fn verify_flags_collinear_points() {
    let bad = r#"{"q":32,"modulus":"0x25","points":[[0,0,1],[1,1,1],[2,2,1],[3,0,1]]}"#;
    let o = run(&["verify"], bad);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("is_arc=false"));
}

#[test]
fn verify_finds_the_diagonal_line_of_a_four_arc() {
    let o = run(&["verify", "-"], FOUR_ARC);
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o);
    assert!(out.contains("hyperfocused_lines=1"), "{out}");
    assert!(out.contains("verdict=hyperfocused"));
    assert!(out.contains("line=(0,0,1)"));
}

#[test]
fn malformed_records_exit_65() {
    assert_eq!(run(&["verify"], "{\"q\":32,").status.code(), Some(65));
    assert_eq!(run(&["classify"], "[1,2]").status.code(), Some(65));
}

#[test]
fn construct_examples() {
    let o = run(&["construct", "translation", "--gens", "(1,1);(w,w^2)"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("\"verdict\":\"hyperfocused\""));
    assert!(text(&o).contains("\"k\":4"));

    let o = run(&["construct", "hyperoval", "--i", "1", "--sample-lines", "20"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).contains("\"k\":34"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sampled_lines=20 hyperfocused=20"));

    assert_eq!(run(&["construct", "hyperoval", "--i", "0"], "").status.code(), Some(64));
    assert_eq!(run(&["construct", "nonsense"], "").status.code(), Some(64));
}

#[test]
fn classify_dedups_and_merges_frobenius_images() {
    let o = run(&["classify"], &format!("{FOUR_ARC}\n{FOUR_ARC}\n"));
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).starts_with("arcs=1 classes=1\nclass=1 size=1 "));

    // A translation 4-arc and its image under x -> x^2.
    let a = r#"{"q":32,"modulus":"0x25","points":[[0,0,1],[2,3,1],[5,7,1],[7,4,1]]}"#;
    let b = r#"{"q":32,"modulus":"0x25","points":[[0,0,1],[4,5,1],[17,21,1],[21,16,1]]}"#;
    let o = run(&["classify"], &format!("{a}\n{b}\n"));
    assert_eq!(o.status.code(), Some(0));
    assert!(text(&o).starts_with("arcs=2 classes=1\n"), "{}", text(&o));
}

#[test]
fn classify_rejects_mixed_focus_lines() {
    let a = r#"{"q":32,"modulus":"0x25","focus_line":[0,0,1],"points":[[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#;
    let b = r#"{"q":32,"modulus":"0x25","focus_line":[1,1,1],"points":[[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#;
    assert_eq!(run(&["classify"], &format!("{a}\n{b}\n")).status.code(), Some(65));
}

#[test]
fn field_dump_lists_powers() {
    let o = run(&["field-dump", "--s", "5", "--modulus", "0x25"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = text(&o);
    assert!(out.starts_with("s=5 q=32 modulus=0x25\n"));
    assert!(out.contains("w^5=0x5\n"));
    assert_eq!(out.lines().count(), 32);
    assert_eq!(
        run(&["field-dump", "--s", "5", "--modulus", "0x21"], "").status.code(),
        Some(64)
    );
}
