use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fpcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpcheck"))
        .args(args)
        .env_remove("FPCHECK_BUDGET")
        .output()
        .expect("fpcheck runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const PQ: &str = "universe a b\nprocess p\n  delta a=1 b=1\n  gamma a=1\nend\nprocess q\n  delta a=1\n  gamma a=1 b=1\nend\n";

#[test]
fn self_refinement_holds() {
    let out = fpcheck(&["check", &corpus("refines_self.fps")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("ok    assert refines p p"));
}

#[test]
fn false_refinement_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "f.fps",
        &format!("{PQ}assert refines p q\nassert refines q p\n"),
    );
    let out = fpcheck(&["check", &file]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("ok    assert refines p q"), "{text}");
    assert!(
        text.contains("FAIL  assert refines q p  [witness: execution b]"),
        "{text}"
    );
}

#[test]
fn malformed_file_exits_two_with_position() {
    let out = fpcheck(&["check", &corpus("malformed/unknown_label.fps")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("unknown_label.fps:3:13: unknown label `z`"),
        "{}",
        stderr(&out)
    );
    assert!(stdout(&out).is_empty());

    let out = fpcheck(&["check", "/nonexistent/file.fps"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn warnings_do_not_change_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "w.fps",
        "universe a b\nprocess p\n  delta a=1\nend\nassert support-refines p p\n",
    );
    let out = fpcheck(&["check", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("warning: non-total operand `p` (rejections: b)"));
}

#[test]
fn json_report_is_parseable_and_deterministic() {
    let file = corpus("refinement_failure.fps");
    let first = fpcheck(&["check", &file, "--json"]);
    let second = fpcheck(&["check", &file, "--json"]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(report["all_hold"], false);
    assert_eq!(report["failed"], 2);
    let results = report["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    assert_eq!(results[1]["verdict"]["witness"]["label"], "c");
    assert_eq!(results[1]["verdict"]["level"], "membership");
}

#[test]
fn every_corpus_file_is_deterministic() {
    for entry in fs::read_dir(corpus("")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "fps") {
            let p = path.display().to_string();
            let (a, b) = (fpcheck(&["check", &p]), fpcheck(&["check", &p]));
            assert_eq!(a.stdout, b.stdout, "{p}");
            assert!(
                matches!(a.status.code(), Some(0 | 1)),
                "{p}: {}",
                stderr(&a)
            );
        }
    }
}

#[test]
fn solve_against_omega() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "s.fps", PQ);
    let out = fpcheck(&["solve", &file, "--p", "p", "--q", "OMEGA"]);
    assert_eq!(out.status.code(), Some(0));
    // -Ω = Ω, so r_min = p ⊕ Ω.
    assert!(
        stdout(&out).contains("r_min = [a:1,1 b:1,0]"),
        "{}",
        stdout(&out)
    );

    let out = fpcheck(&["solve", &file, "--p", "p", "--q", "q", "--json"]);
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["verification"]["holds"], true);
    assert!(json["r_min"]["delta"].is_object());

    let out = fpcheck(&["solve", &file, "--p", "p", "--q", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unresolved name `nope`"));
}

#[test]
fn factor_reports_reconstruction() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "f.fps",
        "universe a\nprocess zero\nend\nprocess one\n  delta a=1/2\nend\n",
    );
    let out = fpcheck(&["factor", &file, "--p", "one"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reconstruction: exact"));

    let out = fpcheck(&["factor", &file, "--p", "zero", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["reconstruction"], "inexact");
    assert_eq!(json["mismatched"], serde_json::json!(["a"]));
}

#[test]
fn laws_write_compare_and_drift() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("laws.manifest").display().to_string();
    let small = [
        "laws",
        "--grid",
        "1",
        "--max-universe",
        "1",
        "--manifest",
        &manifest,
    ];

    let out = fpcheck(&[&small[..], &["--write"]].concat());
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = fs::read_to_string(&manifest).unwrap();
    assert!(text.starts_with("fpcheck laws manifest v1\n"));
    assert!(text.contains("law prop1-support"));

    let out = fpcheck(&small);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("manifest matches"));

    fs::write(
        &manifest,
        text.replace("class: total-arguments-only", "class: unconditional"),
    )
    .unwrap();
    let out = fpcheck(&small);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        stdout(&out).contains("+   class: total-arguments-only"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn laws_budget_exceeded_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_fpcheck"))
        .args(["laws", "--write", "--manifest", "/dev/null"])
        .env("FPCHECK_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"));
}
