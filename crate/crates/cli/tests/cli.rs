use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Dir(TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }
}

fn whl(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_whl"))
        .args(args.iter().map(|a| a.as_ref()))
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &std::ffi::OsStr {
    path.as_os_str()
}

#[test]
fn golden_run() {
    let d = Dir::new();
    let src = d.file("block.whl", "begin var Nat a := 4; b := 2 end");
    let store = d.file("store.txt", "({a=3, b=5})");
    let o = whl(&[&"run", &p(&src), &"--initial-store", &p(&store)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "terminated void ({a=3, b=2})\n");
}

#[test]
fn trace_writes_one_json_line_per_step_and_a_status() {
    let d = Dir::new();
    let src = d.file("block.whl", "begin var Nat a := 4; b := 2 end");
    let store = d.file("store.txt", "({a=3, b=5})");
    let out = d.path("trace.jsonl");
    let o = whl(&[&"trace", &p(&src), &"--initial-store", &p(&store), &"--out", &p(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 6);
    assert!(lines[0].contains("\"rule\":\"Begin\""));
    assert!(lines[5].contains("\"status\":\"terminated\""));
}

#[test]
fn check_accepts_and_rejects() {
    let d = Dir::new();
    let ok = d.file("ok.whl", "var Nat x := 1; while x <= 4 do x := x + 1");
    let o = whl(&[&"check", &p(&ok)]);
    assert_eq!((code(&o), stdout(&o)), (0, "ok: Cmd\n".into()));
    let o = whl(&[&"check", &p(&ok), &"--emit-derivation"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("T-Seq: "));
    let bad = d.file(
        "bad.whl",
        "var Nat y := 1; begin var Nat x := 2; var Bool y := true x := x + y end",
    );
    let o = whl(&[&"check", &p(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("at x + y: expected Nat, found Bool"), "{}", stderr(&o));
}

#[test]
fn checked_run_refuses_ill_typed_programs() {
    let d = Dir::new();
    let src = d.file("bad.whl", "var Nat x := true");
    assert_eq!(code(&whl(&[&"run", &p(&src)])), 0);
    assert_eq!(code(&whl(&[&"run", &p(&src), &"--checked"])), 2);
}

#[test]
fn input_errors_exit_1() {
    let d = Dir::new();
    let empty = d.file("empty.whl", "");
    assert_eq!(code(&whl(&[&"parse", &p(&empty)])), 1);
    let runtime = d.file("rt.whl", "beginscope");
    assert_eq!(code(&whl(&[&"run", &p(&runtime)])), 1);
    assert_eq!(code(&whl(&[&"run", &p(&d.path("missing.whl"))])), 1);
    assert_eq!(code(&whl(&[&"run"])), 1);
    assert_eq!(code(&whl(&[&"--help"])), 0);
}

#[test]
fn stuck_runs_exit_3() {
    let d = Dir::new();
    let src = d.file("unbound.whl", "x := 1");
    let o = whl(&[&"run", &p(&src)]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("unbound variable `x`"), "{}", stdout(&o));
}

#[test]
fn budgets_exit_4() {
    let d = Dir::new();
    let src = d.file("loop.whl", "var Nat x := 0; while true do x := x + 1");
    let o = whl(&[&"run", &p(&src), &"--max-steps", &"10"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).starts_with("budget exceeded after 10 steps\nstore "));
    let o = whl(&[&"outcomes", &p(&src), &"--max-states", &"20"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("complete: false"));
}

#[test]
fn outcomes_of_the_protected_example() {
    let d = Dir::new();
    let src = d.file("ex5.whl", "var Nat x := 0; protect x := 2; x := 4 end par x := 6");
    let o = whl(&[&"outcomes", &p(&src)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "terminated void ({x=4})\nterminated void ({x=6})\ncomplete: true\n"
    );
}

#[test]
fn graph_output_is_reproducible() {
    let d = Dir::new();
    let src = d.file("race.whl", "x := 1 par x := 2");
    let store = d.file("store.txt", "({x=0})");
    let (a, b) = (d.path("a.dot"), d.path("b.dot"));
    for out in [&a, &b] {
        let o = whl(&[&"graph", &p(&src), &"--initial-store", &p(&store), &"--out", &p(out)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let dot = fs::read_to_string(&a).unwrap();
    assert_eq!(dot, fs::read_to_string(&b).unwrap());
    assert!(dot.starts_with("digraph reduction {"));
    assert_eq!(dot.matches(" -> ").count(), 4);
}

#[test]
fn random_schedule_is_seeded() {
    let d = Dir::new();
    let src = d.file(
        "race.whl",
        "var Nat x := 0; { x := x + 1; x := x * 2 } par x := 10",
    );
    let runs: Vec<String> = (0..2)
        .map(|_| stdout(&whl(&[&"trace", &p(&src), &"--schedule", &"random", &"--seed", &"7"])))
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(!runs[0].is_empty());
}

#[test]
fn parse_prints_the_canonical_form() {
    let d = Dir::new();
    let src = d.file("p.whl", "var Nat x:=1;x:=x+1");
    let o = whl(&[&"parse", &p(&src)]);
    assert_eq!(code(&o), 0);
    let canon = d.file("c.whl", &stdout(&o));
    assert_eq!(stdout(&whl(&[&"parse", &p(&canon)])), stdout(&o));
}
