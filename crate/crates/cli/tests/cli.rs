use std::fs;
use std::process::{Command as Process, Output};

use diagonal_billiard::{simulate, Direction, LaunchSpec, Orbit, Rational};
use diagonal_billiard_cli::{exit, parse_args, render_svg, Command, Format};

fn r(s: &str) -> Rational {
    s.parse().unwrap()
}

fn billiard(args: &[&str]) -> Output {
    Process::new(env!("CARGO_BIN_EXE_billiard")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn args(line: &str) -> Vec<&str> {
    std::iter::once("billiard").chain(line.split_whitespace()).collect()
}

fn w_spec() -> LaunchSpec {
    LaunchSpec::from_parts(r("3/10"), r("1/20"), Direction::NorthEast).unwrap()
}

#[test]
fn parses_the_worked_example() {
    match parse_args(args("simulate --p 3/10 --s1 1/20 --dir ne --n 5")).unwrap() {
        Command::Simulate { launch, output } => {
            assert_eq!(launch.spec, w_spec());
            assert_eq!(launch.n, 5);
            assert_eq!(output.format, Format::Json);
            assert_eq!(output.path, None);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn decimal_input_is_exact() {
    let a = parse_args(args("verify --p 0.3 --s1 0.05 --dir NE --n 5")).unwrap();
    let b = parse_args(args("verify --p 3/10 --s1 1/20 --dir ne --n 5")).unwrap();
    assert_eq!(a, b);
    let x = billiard(&args("verify --p 0.3 --s1 0.05 --dir ne --n 5")[1..]);
    let y = billiard(&args("verify --p 3/10 --s1 1/20 --dir ne --n 5")[1..]);
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn usage_errors() {
    for line in [
        "simulate --p 0/1 --s1 1/8 --dir ne --n 5",
        "simulate --p 1/2 --s1 1/8 --dir ne --n 5",
        "simulate --p 3/10 --s1 1/20 --dir sw --n 5",
        "simulate --p 3/10 --s1 1 --dir ne --n 5",
        "simulate --p 3/10 --s1 1/20 --dir up --n 5",
        "simulate --p x --s1 1/20 --dir ne --n 5",
        "verify --p 3/10 --s1 1/20 --dir ne --n 4",
        "render --p 3/10 --s1 1/20 --dir ne --n 5 --format json",
        "sweep --den-min 5 --den-max 4",
        "sweep --n-min 3",
        "frobnicate",
    ] {
        let err = parse_args(args(line)).unwrap_err();
        assert_eq!(err.code, exit::USAGE, "{line}: {}", err.message);
        assert_eq!(code(&billiard(&args(line)[1..])), 64, "{line}");
    }
}

#[test]
fn help_exits_zero() {
    let out = billiard(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("sweep"));
}

#[test]
fn simulate_prints_the_orbit() {
    let out = billiard(&args("simulate --p 3/10 --s1 1/20 --dir ne --n 5")[1..]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let s: Vec<&str> = doc["points"].as_array().unwrap().iter().map(|p| p["s"].as_str().unwrap()).collect();
    assert_eq!(s, ["1/20", "11/20", "9/20", "3/20", "17/20"]);
}

#[test]
fn simulate_csv() {
    let out = billiard(&args("simulate --p 3/10 --s1 1/20 --dir ne --n 5 --format csv")[1..]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j,s,side,x,y");
    assert_eq!(lines[2], "2,11/20,top,1/4,1/5");
    assert_eq!(lines.len(), 6);
}

#[test]
fn degenerate_orbits_have_their_own_exit_codes() {
    // The square table: F(5) returns to F(1).
    assert_eq!(code(&billiard(&args("simulate --p 1/4 --s1 1/8 --dir ne --n 5")[1..])), 3);
    assert_eq!(code(&billiard(&args("simulate --p 3/8 --s1 1/4 --dir ne --n 5")[1..])), 2);
    // Launching from a corner.
    assert_eq!(code(&billiard(&args("simulate --p 3/10 --s1 3/10 --dir nw --n 5")[1..])), 2);
    assert_eq!(code(&billiard(&args("verify --p 1/4 --s1 1/8 --dir ne --n 5")[1..])), 3);
}

#[test]
fn verify_exit_code_matches_report() {
    let out = billiard(&args("verify --p 3/10 --s1 1/20 --dir ne --n 5")[1..]);
    assert_eq!(code(&out), 0);
    let report: diagonal_billiard::VerificationReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.overall);
    assert_eq!(report.failures().count(), 0);
}

#[test]
fn analyze_prints_the_profile() {
    let out = billiard(&args("analyze --p 3/10 --s1 1/20 --dir ne --n 5")[1..]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["omegas"], serde_json::json!([4, 5, 9, 3, 7]));
    assert_eq!(doc["counts"], serde_json::json!([1, 2, 0, 0, 2]));
    assert_eq!(doc["circular_order"], serde_json::json!([1, 4, 3, 2, 5]));
    assert_eq!(doc["first_family"].as_array().unwrap().len(), 3);
    let both = doc["both_family"].as_array().unwrap();
    assert_eq!(both.iter().filter(|s| s["parity"] == "odd").count(), 4);
}

#[test]
fn sweeps_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = billiard(&[
            "sweep",
            "--seed",
            "42",
            "--count",
            "100",
            "--n-max",
            "60",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(path).unwrap()
    };
    let a = run("a.jsonl", "1");
    let b = run("b.jsonl", "2");
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 101);
    for line in &lines[..100] {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(rec["outcome"].is_string());
    }
    let summary: serde_json::Value = serde_json::from_str(lines[100]).unwrap();
    assert_eq!(summary["summary"]["total"], 100);
}

#[test]
fn sweep_summary_to_separate_file() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let out = billiard(&[
        "sweep",
        "--mode",
        "exhaustive",
        "--den-min",
        "3",
        "--den-max",
        "6",
        "--n-min",
        "5",
        "--n-max",
        "8",
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&fs::read(summary).unwrap()).unwrap();
    let total = doc["total"].as_u64().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count() as u64, total);
    assert_eq!(doc["failed"], 0);
}

fn orbit(p: &str, s1: &str, dir: Direction, n: usize) -> Orbit {
    simulate(&LaunchSpec::from_parts(r(p), r(s1), dir).unwrap(), n).unwrap()
}

fn svg_of(orbit: &Orbit) -> String {
    let analysis = diagonal_billiard::Analysis::new(orbit).ok();
    let elementary = diagonal_billiard::circular_order(orbit).elementary_segments();
    let profile = analysis.and_then(|a| a.profile.ok());
    render_svg(orbit, &elementary, profile.as_ref())
}

fn classes_of<'a>(doc: &'a roxmltree::Document, prefix: &str) -> Vec<&'a str> {
    doc.descendants().filter_map(|n| n.attribute("class")).filter(|c| c.starts_with(prefix)).collect()
}

#[test]
fn svg_of_the_worked_example() {
    let svg = svg_of(&orbit("3/10", "1/20", Direction::NorthEast, 5));
    let doc = roxmltree::Document::parse(&svg).expect("well-formed XML");
    let arcs: Vec<&str> = classes_of(&doc, "arc w");
    assert_eq!(arcs.len(), 5);
    let mut stroke: Vec<&str> = arcs.clone();
    stroke.sort();
    stroke.dedup();
    assert_eq!(stroke, ["arc w0", "arc w1", "arc w4"]);
    assert_eq!(classes_of(&doc, "arc legend").len(), 3);
    let labels: Vec<&str> =
        doc.descendants().filter(|n| n.attribute("class") == Some("label")).filter_map(|n| n.text()).collect();
    assert_eq!(labels, ["F1", "F2", "F3", "F4", "F5"]);
    let weights: Vec<&str> = doc.descendants().filter_map(|n| n.attribute("data-weight")).collect();
    assert_eq!(weights, ["5", "7", "5", "7", "4"]);
}

#[test]
fn svg_of_the_square_diamond() {
    let svg = svg_of(&orbit("1/4", "1/8", Direction::NorthEast, 4));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let path = doc.descendants().find(|n| n.attribute("class") == Some("path")).unwrap();
    // Side midpoints of the 544-pixel square drawn at (48, 48).
    assert_eq!(path.attribute("points"), Some("320,592 592,320 320,48 48,320"));
}

#[test]
fn svg_of_a_two_point_orbit() {
    let svg = svg_of(&orbit("3/10", "1/20", Direction::NorthEast, 2));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    // F(1)→F(2) and F(2)→F(1) have the same weight 3, so one class.
    assert_eq!(classes_of(&doc, "arc w").len(), 2);
    assert_eq!(classes_of(&doc, "arc legend").len(), 1);
}

#[test]
fn render_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.svg");
    let out = billiard(&[
        "render",
        "--p",
        "3/10",
        "--s1",
        "1/20",
        "--dir",
        "ne",
        "--n",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = fs::read_to_string(path).unwrap();
    assert_eq!(svg, svg_of(&orbit("3/10", "1/20", Direction::NorthEast, 5)));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let out = billiard(&[
        "simulate",
        "--p",
        "3/10",
        "--s1",
        "1/20",
        "--dir",
        "ne",
        "--n",
        "5",
        "--out",
        "/nonexistent/dir/x.json",
    ]);
    assert_eq!(code(&out), 74);
}
