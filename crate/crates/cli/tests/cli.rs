use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use packclass_cli::format::{InstanceFile, ResultFile, VerdictName};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn packclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_packclass"))
        .args(args)
        .env_remove("PACKCLASS_TIME_LIMIT")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn result_of(out: &Output) -> ResultFile {
    serde_json::from_slice(&out.stdout).expect("stdout is a result file")
}

#[test]
fn opp_five_boxes_is_feasible_and_reverifies() {
    let dir = tempfile::tempdir().unwrap();
    let res = dir.path().join("r.json");
    let inst = fixture("five_boxes.json");
    let out = packclass(&["opp", path(&inst), "-o", path(&res)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r: ResultFile = serde_json::from_str(&std::fs::read_to_string(&res).unwrap()).unwrap();
    assert_eq!((r.format, r.verdict), (1, VerdictName::Feasible));
    assert_eq!(r.positions.len(), 5);
    assert_eq!(r.class.as_ref().map(Vec::len), Some(2));

    let check = packclass(&["verify", path(&inst), "--packing", path(&res), "--class", path(&res)]);
    assert_eq!(code(&check), 0, "{}", stdout(&check));
}

#[test]
fn opp_exit_codes() {
    assert_eq!(code(&packclass(&["opp", path(&fixture("two_squares.json"))])), 1);
    let limited = packclass(&["opp", path(&fixture("five_boxes.json")), "--max-nodes", "0", "--no-shortcuts"]);
    assert_eq!(code(&limited), 2);
    assert_eq!(result_of(&limited).verdict, VerdictName::ResourceLimit);
}

#[test]
fn parse_errors_exit_64_with_location() {
    let out = packclass(&["opp", path(&fixture("malformed.json"))]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("malformed.json:3:14"), "{}", stderr(&out));
    assert_eq!(code(&packclass(&["opp", "/nonexistent/file.json"])), 64);
    assert_eq!(code(&packclass(&["frobnicate"])), 64);
    assert_eq!(code(&packclass(&["--help"])), 0);
}

#[test]
fn time_limit_environment_variable() {
    let inst = fixture("five_boxes.json");
    let bad = Command::new(env!("CARGO_BIN_EXE_packclass"))
        .args(["opp", path(&inst)])
        .env("PACKCLASS_TIME_LIMIT", "soon")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 64);
    let zero = Command::new(env!("CARGO_BIN_EXE_packclass"))
        .args(["opp", path(&inst), "--no-shortcuts"])
        .env("PACKCLASS_TIME_LIMIT", "0")
        .output()
        .unwrap();
    assert_eq!(code(&zero), 2);
}

#[test]
fn okp_and_spp_values() {
    let inst = fixture("five_boxes.json");
    let okp = packclass(&["okp", path(&inst)]);
    assert_eq!(code(&okp), 0);
    let r = result_of(&okp);
    assert_eq!((r.verdict, r.value.unwrap().to_string()), (VerdictName::Optimal, "18".to_string()));

    let single = fixture("single.json");
    assert_eq!(result_of(&packclass(&["okp", path(&single)])).value.unwrap().to_string(), "7");
    let spp = result_of(&packclass(&["spp", path(&single)]));
    assert_eq!(spp.height.unwrap().to_string(), "2");

    let oracle = result_of(&packclass(&["oracle", "spp", path(&inst)]));
    let spp = packclass(&["spp", path(&inst), "--fixed-dims", "5"]);
    assert_eq!(code(&spp), 0);
    assert_eq!(result_of(&spp).height, oracle.height);
    assert_eq!(code(&packclass(&["spp", path(&inst), "--fixed-dims", "5,5"])), 64);
    assert_eq!(code(&packclass(&["spp", path(&inst), "--fixed-dims", "3"])), 1);
}

#[test]
fn verify_reports_witnesses() {
    let inst = fixture("two_squares.json");
    let overlap = packclass(&["verify", path(&inst), "--packing", path(&fixture("overlap.json"))]);
    assert_eq!(code(&overlap), 1);
    assert!(stdout(&overlap).contains("Overlap(\"a\", \"b\")"), "{}", stdout(&overlap));

    let shared = packclass(&["verify", path(&inst), "--class", path(&fixture("shared_edge.json"))]);
    assert_eq!(code(&shared), 1);
    assert!(stdout(&shared).contains("P3"));

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, r#"{"positions": {"a": [0, 0]}}"#).unwrap();
    assert_eq!(code(&packclass(&["verify", path(&inst), "--packing", path(&good)])), 0);
    assert_eq!(code(&packclass(&["verify", path(&inst)])), 64);
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let inst = fixture("five_boxes.json");
    let res = dir.path().join("r.json");
    assert_eq!(code(&packclass(&["opp", path(&inst), "-o", path(&res)])), 0);
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert_eq!(code(&packclass(&["render", path(&inst), path(&res), path(&a)])), 0);
    assert_eq!(code(&packclass(&["render", path(&inst), path(&res), path(&b)])), 0);
    let svg = std::fs::read(&a).unwrap();
    assert_eq!(svg, std::fs::read(&b).unwrap());
    let text = String::from_utf8(svg).unwrap();
    assert!(text.contains(r#"viewBox="0 0 5000 5000""#));
    assert_eq!(text.matches("<rect").count(), 6);

    let single = fixture("single.json");
    let one = dir.path().join("one.json");
    std::fs::write(&one, r#"{"positions": {"only": [0, 0]}}"#).unwrap();
    let svg = dir.path().join("one.svg");
    assert_eq!(code(&packclass(&["render", path(&single), path(&one), path(&svg)])), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"<rect x="0" y="1000" width="1500" height="2000""#), "{text}");

    let cube = packclass(&["render", path(&fixture("cube.json")), path(&res), path(&a)]);
    assert_eq!(code(&cube), 65);
}

#[test]
fn convert_ngcut() {
    let dir = tempfile::tempdir().unwrap();
    let out = packclass(&["convert", "--from", "ngcut", path(&fixture("ngcut_three.txt")), path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("3 integers per piece"));
    let converted: InstanceFile =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("ngcut_three-1.json")).unwrap()).unwrap();
    assert_eq!((converted.d, converted.boxes.len()), (2, 2));

    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "").unwrap();
    let failed = packclass(&["convert", "--from", "ngcut", path(&empty), path(dir.path())]);
    assert_eq!(code(&failed), 65);
    assert!(stderr(&failed).contains("line 1"));

    let none = dir.path().join("none.txt");
    std::fs::write(&none, "0\n").unwrap();
    let sub = dir.path().join("none");
    assert_eq!(code(&packclass(&["convert", "--from", "ngcut", path(&none), path(&sub)])), 0);
    assert_eq!(std::fs::read_dir(&sub).unwrap().count(), 0);
}

#[test]
fn oracle_and_sweep() {
    let classes = packclass(&["oracle", "classes", path(&fixture("five_boxes.json"))]);
    assert_eq!(code(&classes), 0);
    assert_eq!(result_of(&classes).stats.extra["count"], 7);
    assert_eq!(code(&packclass(&["oracle", "opp", path(&fixture("two_squares.json"))])), 1);

    let sweep = packclass(&["sweep", "--count", "30", "--seed", "7", "--jobs", "2"]);
    assert_eq!(code(&sweep), 0, "{}", stdout(&sweep));
    let summary: serde_json::Value = serde_json::from_slice(&sweep.stdout).unwrap();
    assert_eq!(summary["comparisons"], 90);
    assert_eq!(summary["agreements"], 90);
}

#[test]
fn drop_oversized() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("big.json");
    std::fs::write(&inst, r#"{"d": 1, "container": [3], "boxes": [{"id": "x", "size": [4]}, {"id": "y", "size": [2]}]}"#)
        .unwrap();
    assert_eq!(code(&packclass(&["opp", path(&inst)])), 64);
    let out = packclass(&["opp", path(&inst), "--drop-oversized"]);
    assert_eq!(code(&out), 0);
    assert_eq!(result_of(&out).dropped, vec!["x".to_string()]);
}
