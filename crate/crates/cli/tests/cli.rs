use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gerbecoh"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn fixture(dir: &TempDir, name: &str) -> PathBuf {
    let o = run(&["fixture", name]);
    assert_eq!(o.status.code(), Some(0));
    write(dir, &format!("{name}.json"), &stdout(&o))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const Z2: &str = r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}}, "modules": {"M": {"group": "G", "factors": [2]}}}"#;

const SINGLE_PLACE: &str = r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}},
  "model": {"group": "G", "mu": {"modulus": 2}, "places": [{"name": "v", "subgroup": [0, 1], "inv": ["1/2"]}]}}"#;

const Z4_OVER_Z2: &str = r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}, "P": {"permutations": [[1, 2, 3, 0]]}},
  "extensions": {"E": {"gamma": "P", "base": "G", "kernel": "G", "pi": [0, 1, 0, 1], "iota": [0, 2]}},
  "model": {"group": "G", "mu": {"modulus": 2},
            "places": [{"subgroup": [0, 1], "inv": ["1/2"]}, {"subgroup": [0, 1], "inv": ["1/2"]}]}}"#;

#[test]
fn cohomology_of_z2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "z2.json", Z2);
    let o = run(&["cohomology", s(&f), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H^1(G, M) = Z/2\n");
    let o = run(&["cohomology", s(&f), "--degree", "2", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["structure"], serde_json::json!([2]));
}

#[test]
fn single_place_model_fails_reciprocity() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", SINGLE_PLACE);
    let o = run(&["model", "check", s(&f)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("A2 fail"));
}

#[test]
fn q8_factorization_holds() {
    let dir = TempDir::new().unwrap();
    let f = fixture(&dir, "q8-mixed");
    let o = run(&["verify", "thm41", s(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("factorization holds"));
}

#[test]
fn obstructions_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "z4.json", Z4_OVER_Z2);
    assert_eq!(run(&["gerbe", "local-sections", s(&f)]).status.code(), Some(1));
    assert_eq!(run(&["gerbe", "mh", s(&f)]).status.code(), Some(1));
    let w = fixture(&dir, "witness-abelian-v");
    assert_eq!(run(&["gerbe", "mh", s(&w)]).status.code(), Some(0));
    let o = run(&["gerbe", "mh", s(&w), "--expect-zero"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("= 1/2"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "broken.json", "{\n  \"groups\": {\"G\": {\"table\": [[0, 1], [1, 0]]}\n");
    let o = run(&["cohomology", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let f = write(&dir, "unknown.json", r#"{"modules": {"M": {"group": "X", "factors": [2]}}}"#);
    let o = run(&["cohomology", s(&f), "--output", "json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("unknown group 'X'"));
}

#[test]
fn dumped_documents_reproduce_results() {
    let dir = TempDir::new().unwrap();
    let original = write(&dir, "z4.json", Z4_OVER_Z2);
    let dumped = write(&dir, "z4-dump.json", &stdout(&run(&["dump", s(&original)])));
    for cmd in [&["gerbe", "class"][..], &["gerbe", "brauer"], &["model", "check"], &["gerbe", "local-sections"]] {
        let mut a = cmd.to_vec();
        a.extend([s(&original), "--output", "json", "--certificates"]);
        let mut b = cmd.to_vec();
        b.extend([s(&dumped), "--output", "json", "--certificates"]);
        assert_eq!(stdout(&run(&a)), stdout(&run(&b)), "{cmd:?}");
    }
    for name in ["s3-lines-03", "witness-v", "sha1-witness"] {
        let f = fixture(&dir, name);
        let again = write(&dir, &format!("{name}-dump.json"), &stdout(&run(&["dump", s(&f)])));
        assert_eq!(std::fs::read_to_string(&f).unwrap(), std::fs::read_to_string(&again).unwrap());
        let cmd: &[&str] = if name.starts_with("sha") { &["sha"] } else { &["gerbe", "mh"] };
        let mut a = cmd.to_vec();
        a.extend([s(&f), "--output", "json", "--certificates"]);
        let mut b = cmd.to_vec();
        b.extend([s(&again), "--output", "json", "--certificates"]);
        assert_eq!(stdout(&run(&a)), stdout(&run(&b)));
    }
}

#[test]
fn tasks_run_in_order() {
    let dir = TempDir::new().unwrap();
    let doc = r#"{"groups": {"G": {"table": [[0, 1], [1, 0]]}}, "modules": {"M": {"group": "G", "factors": [2]}},
      "tasks": [{"command": "cohomology", "degree": 1}, {"command": "cohomology", "degree": 2}, {"command": "frobnicate"}]}"#;
    let f = write(&dir, "tasks.json", doc);
    let o = run(&["run", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("H^1(G, M) = Z/2") && out.contains("H^2(G, M) = Z/2"));
}

#[test]
fn selftest_reports_are_byte_identical() {
    let a = run(&["selftest", "--output", "json"]);
    let b = run(&["selftest", "--output", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["passed"], true);
}
