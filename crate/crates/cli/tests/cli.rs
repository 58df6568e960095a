use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const D1: &str = r#"{"family":"dendriform","dim":1,"products":{"1":[[[1]]],"2":[[[0]]]}}"#;
const IDEMPOTENT: &str = r#"{"family":"associative","dim":1,"products":{"*":[[[1]]]}}"#;
const QX: &str = r#"{"family":"associative","dim":3,"products":{"*":[
  [[1,0,0],[0,1,0],[0,0,1]],
  [[0,1,0],[0,0,1],[0,0,0]],
  [[0,0,1],[0,0,0],[0,0,0]]]}}"#;
const OBSTRUCTED: &str = r#"{"base":{"family":"dendriform","dim":1,"products":{}},
  "order":1,"terms":[{"1":[[[1]]],"2":[[[1]]]}]}"#;

struct Sandbox {
    dir: TempDir,
}

impl Sandbox {
    fn new() -> Self {
        Sandbox { dir: TempDir::new().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn loday(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loday")).args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn dialgebra_shapes_are_catalan() {
    let o = loday(&["shapes", "--family", "dialgebra", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 14);
}

#[test]
fn validate_reports_per_family_count() {
    let sb = Sandbox::new();
    let d1 = sb.file("d1.json", D1);
    let o = loday(&["validate", s(&d1)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "multiplication verified on 3 shapes of U_3");
}

#[test]
fn invalid_algebra_exits_one_with_witness() {
    let sb = Sandbox::new();
    let bad = sb.file("bad.json", r#"{"family":"dendriform","dim":1,"products":{"1":[[[1]]],"2":[[[1]]]}}"#);
    let o = loday(&["validate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("has coordinate"));
}

#[test]
fn adjoint_cohomology_of_d1() {
    let sb = Sandbox::new();
    let d1 = sb.file("d1.json", D1);
    let o = loday(&["cohomology", s(&d1), "--rep", "adjoint", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Z¹=0 B¹=0 H¹=0");
}

#[test]
fn rigidity_is_stated_as_implication() {
    let sb = Sandbox::new();
    let a = sb.file("e.json", IDEMPOTENT);
    let o = loday(&["cohomology", s(&a), "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H²=0 ⇒"));
    let q = sb.file("q.json", QX);
    let o = loday(&["cohomology", s(&q), "--n", "2"]);
    let out = stdout(&o);
    assert!(out.starts_with("Z²=9 B²=7 H²=2"), "{out}");
    assert!(out.contains("rigidity is not implied"), "{out}");
}

#[test]
fn obstructed_extension_exits_one() {
    let sb = Sandbox::new();
    let d = sb.file("def.json", OBSTRUCTED);
    let o = loday(&["deform-extend", s(&d)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("obstruction cocycle coordinates"));
    assert!(out.contains("(e1,e1,e1)"));
    let o = loday(&["obstruction", s(&d)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extension_round_trip_through_files() {
    let sb = Sandbox::new();
    let d1 = sb.file("d1.json", D1);
    let start = sb.file(
        "start.json",
        &format!(r#"{{"base":{D1},"order":1,"terms":[{{"1":[[[1]]],"2":[[[0]]]}}]}}"#),
    );
    let out = sb.path("out.json");
    let o = loday(&["deform-extend", s(&start), "--steps", "2", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = loday(&["deform-check", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hold to order 3"));
    let o = loday(&["validate", s(&d1)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn equivalent_to_trivial_via_identity_direction() {
    // π_1 = π = d_π(id) on D1
    let sb = Sandbox::new();
    let triv = sb.file("t.json", &format!(r#"{{"base":{D1},"order":1,"terms":[{{}}]}}"#));
    let moved = sb.file(
        "m.json",
        &format!(r#"{{"base":{D1},"order":1,"terms":[{{"1":[[[1]]],"2":[[[0]]]}}]}}"#),
    );
    let o = loday(&["--format", "json", "equivalence", s(&triv), s(&moved)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("\"equivalent\": true"));
}

#[test]
fn extension_from_trivial_coefficients() {
    let sb = Sandbox::new();
    let d1 = sb.file("d1.json", D1);
    let f = sb.file(
        "f.json",
        r#"{"family":"dendriform","arity":2,"in_dim":1,"out_dim":1,
            "entries":[{"shape":"1","inputs":[0,0],"output":0,"value":"1/2"}]}"#,
    );
    let zero = sb.file("z.json", r#"{"family":"dendriform","arity":2,"in_dim":1,"out_dim":1,"entries":[]}"#);
    let o = loday(&["extension", s(&d1), "--cocycle", s(&f), "--rep", "trivial"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("extension of dimension 2 = 1 + 1 verified"));
    let o = loday(&["extension", s(&d1), "--cocycle", s(&zero), "--rep", "trivial", "--compare", s(&zero)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equivalent via"));
}

#[test]
fn morphism_verbs() {
    let sb = Sandbox::new();
    let m = sb.file("f.json", &format!(r#"{{"source":{IDEMPOTENT},"matrix":[[1]]}}"#));
    let o = loday(&["morphism-cohomology", s(&m), "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H²=0"));
    let md = sb.file(
        "md.json",
        &format!(
            r#"{{"source":{IDEMPOTENT},"matrix":[[1]],"order":1,
                "source_terms":[{{}}],"target_terms":[{{}}],"fterms":[[[0]]]}}"#
        ),
    );
    let o = loday(&["morphism-extend", s(&md), "--steps", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("extended to order 3"));
}

#[test]
fn twist_and_universal_deformation() {
    let sb = Sandbox::new();
    let q = sb.file("q.json", QX);
    let o = loday(&["universal-deform", s(&q), "--d", "0,0,0;0,1,0;0,0,2", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = loday(&["derivations", s(&q)]);
    assert_eq!(o.status.code(), Some(0));
    let twisted = QX[..QX.len() - 1].to_string()
        + r#","alpha":[[1,0,0],[0,2,0],[0,0,4]],"beta":[[1,0,0],[0,2,0],[0,0,4]]}"#;
    let t = sb.file("t.json", &twisted);
    let o = loday(&["--format", "json", "twist-validate", s(&t)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let out = sb.file("tw.json", &report["result"]["twisted"].to_string());
    let o = loday(&["validate", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("under the twisted composition"));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let sb = Sandbox::new();
    let f = sb.file("x.json", r#"{"family":"dendriform","dim":1,"products":{},"colour":1}"#);
    let o = loday(&["validate", s(&f)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
    let g = sb.file("y.json", "{\"family\": ");
    let o = loday(&["validate", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"));
    assert_eq!(loday(&["cohomology"]).status.code(), Some(2));
    let d1 = sb.file("d1.json", D1);
    assert_eq!(loday(&["cohomology", s(&d1), "--n", "6"]).status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical() {
    let sb = Sandbox::new();
    let q = sb.file("q.json", QX);
    let a = loday(&["--format", "json", "cohomology", s(&q), "--n", "2"]);
    let b = loday(&["--format", "json", "cohomology", s(&q), "--n", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    for k in ["verb", "inputs", "result", "witnesses", "timings"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
}
