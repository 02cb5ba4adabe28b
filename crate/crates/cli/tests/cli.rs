use std::path::{Path, PathBuf};
use std::process::Command;

use dmajor_core::arith::{fmt_pq, int, parse_rational, rat};
use dmajor_core::polytope::{build_dmaj_hrep, dmaj_vertices, hausdorff};
use dmajor_core::{RVec, Rational, WeightVec};
use serde_json::Value;
use tempfile::TempDir;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn dmajor(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dmajor"));
    cmd.args(args).env_remove("DMAJOR_MAX_N");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn problem(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../problems")
        .join(name)
        .display()
        .to_string()
}

fn scratch(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn json_of(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn json_stdout(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let out = dmajor(&all, &[]);
    (out.code, serde_json::from_str(&out.stdout).expect("stdout is JSON"))
}

fn rational(v: &Value) -> Rational {
    let s = v.as_str().expect("rationals are strings");
    assert!(s.contains('/'), "{s} is not p/q");
    parse_rational(s).unwrap()
}

fn point(v: &Value) -> RVec {
    RVec::new(v.as_array().unwrap().iter().map(rational).collect())
}

fn sorted(mut points: Vec<RVec>) -> Vec<RVec> {
    points.sort();
    points
}

#[test]
fn cycle_is_reported_with_both() {
    let out = dmajor(&["check", &problem("cycle.txt"), "--both"], &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("preorder cycle detected"));
    let (_, report) = json_stdout(&["check", &problem("cycle.txt"), "--both"]);
    assert_eq!(report["results"]["cycle"], Value::Bool(true));
    assert_eq!(report["results"]["converse"]["holds"], Value::Bool(true));
    let out = dmajor(&["check", &problem("cycle.txt")], &[]);
    assert!(!out.stdout.contains("cycle"));
}

#[test]
fn equal_vectors_have_identity_witness() {
    let dir = TempDir::new().unwrap();
    let file = scratch(&dir, "eq.txt", "x = 1, -2, 3/2\ny = 1, -2, 3/2\nd = 1 2 3\n");
    let (code, report) = json_stdout(&["check", &file, "--both"]);
    assert_eq!(code, 0);
    let r = &report["results"];
    assert_eq!(r["holds"], Value::Bool(true));
    assert_eq!(r["cycle"], Value::Bool(false));
    let rows: Vec<Vec<String>> = serde_json::from_value(r["witness"].clone()).unwrap();
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            assert_eq!(v, if i == j { "1/1" } else { "0/1" });
        }
    }
}

#[test]
fn trace_mismatch_fails_with_reason() {
    let dir = TempDir::new().unwrap();
    let file = scratch(&dir, "t.txt", "x = 1 2 3\ny = 3 2 2\nd = 1 1 1\n");
    let (code, report) = json_stdout(&["check", &file]);
    assert_eq!(code, 1);
    let r = &report["results"];
    assert_eq!(r["holds"], Value::Bool(false));
    assert_eq!(r["reason"], Value::String("trace".into()));
    assert!(r.get("witness").is_none());
    for c in ["iv", "vi", "vii"] {
        assert_eq!(r["criteria"][c], Value::Bool(false));
    }
}

#[test]
fn single_criterion_is_reported_alone() {
    let (code, report) = json_stdout(&["check", &problem("example2.txt"), "--criterion", "vi"]);
    assert_eq!(code, 0);
    let criteria = report["results"]["criteria"].as_object().unwrap();
    assert_eq!(criteria.len(), 1);
    assert_eq!(criteria["vi"], Value::Bool(true));
    assert!(report["results"].get("witness").is_none());
}

#[test]
fn example_two_hrep_and_vertices() {
    let (code, report) = json_stdout(&["polytope", &problem("example2.txt"), "--hrep", "--vertices"]);
    assert_eq!(code, 0);
    assert_eq!(report["version"], Value::String(env!("CARGO_PKG_VERSION").into()));
    assert_eq!(report["n"], Value::from(3));
    let r = &report["results"];
    assert_eq!(rational(&r["T"]), int(4));
    let masks: Vec<Vec<usize>> = r["b"].as_array().unwrap().iter().map(|e| serde_json::from_value(e["mask"].clone()).unwrap()).collect();
    assert_eq!(masks, vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    let b: Vec<Rational> = r["b"].as_array().unwrap().iter().map(|e| rational(&e["value"])).collect();
    assert_eq!(b, [5, 3, 2, 5, 6, 4].map(int));
    let vertices: Vec<RVec> = r["vertices"].as_array().unwrap().iter().map(|v| point(&v["point"])).collect();
    let expected = [[5, 0, -1], [5, -2, 1], [2, 3, -1], [0, 3, 1], [4, -2, 2], [0, 2, 2]];
    assert_eq!(sorted(vertices), sorted(expected.iter().map(|p| RVec::from_ints(p)).collect()));
}

#[test]
fn vertices_round_trip_through_json() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("out.json");
    for (file, y, d) in [
        (problem("example2.txt"), vec![4, -2, 2], vec![4, 2, 1]),
        (problem("negative_y.txt"), vec![1, 1, -1], vec![1, 2, 3]),
    ] {
        let out = dmajor(&["polytope", &file, "--json", out_path.to_str().unwrap()], &[]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let report = json_of(&out_path);
        let sys = build_dmaj_hrep(&RVec::from_ints(&y), &WeightVec::from_ints(&d).unwrap()).unwrap();
        let vertices = report["results"]["vertices"].as_array().unwrap();
        assert!(!vertices.is_empty());
        for v in vertices {
            let x = point(&v["point"]);
            assert!(sys.contains(&x).unwrap(), "{x} left the polytope");
            let sigma: Vec<usize> = serde_json::from_value(v["sigma"].clone()).unwrap();
            let sigma = dmajor_core::Permutation::from_one_based(&sigma).unwrap();
            assert_eq!(sys.corner(&sigma).unwrap(), x);
        }
    }
}

#[test]
fn max_corner_needs_nonnegative_y() {
    let out = dmajor(&["polytope", &problem("negative_y.txt"), "--max-corner"], &[]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("y has negative entries; no classical maximum exists in general"));
    let dir = TempDir::new().unwrap();
    let file = scratch(&dir, "pos.txt", "y = 3 2 1\nd = 1 2 3\n");
    let (code, report) = json_stdout(&["polytope", &file, "--max-corner"]);
    assert_eq!(code, 0);
    let z = point(&report["results"]["max_corner"]);
    assert_eq!(z.sum(), int(6));
}

/// Closed forms of the six vertices along `d(λ) = (2 + λ, 2, 2 - λ)`.
fn wandering_vertices(lam: &Rational) -> Vec<RVec> {
    let s = int(2) + lam;
    let l2 = lam * lam;
    let over = |a: Rational, b: Rational, c: Rational| RVec::new(vec![a / &s, b / &s, c / &s]);
    sorted(vec![
        RVec::from_ints(&[3, 2, 1]),
        RVec::new(vec![int(3), int(1) + lam, int(2) - lam]),
        over(int(4) + int(5) * lam, int(6), int(2) + lam),
        over(int(2) * &l2 + int(5) * lam + int(2), int(6), -(int(2) * &l2) + lam + int(4)),
        over(-l2.clone() + int(6) * lam + int(4), &l2 + int(3) * lam + int(2), int(6) - int(3) * lam),
        over(int(2) * &l2 + int(5) * lam + int(2), -(int(2) * &l2) + int(4) * lam + int(4), int(6) - int(3) * lam),
    ])
}

#[test]
fn sweep_csv_matches_closed_forms() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("sweep.csv");
    let out = dmajor(
        &["polytope", &problem("wandering.txt"), "--sweep-csv", csv_path.to_str().unwrap()],
        &[],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("lambda,sigma,x1,x2,x3"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let at = |lam: &Rational| -> Vec<RVec> {
        let key = fmt_pq(lam);
        sorted(
            rows.iter()
                .filter(|r| r[0] == key)
                .map(|r| RVec::new(r[2..].iter().map(|v| parse_rational(v).unwrap()).collect()))
                .collect(),
        )
    };
    assert_eq!(at(&rat(3, 10)), wandering_vertices(&rat(3, 10)));
    assert_eq!(at(&rat(7, 10)), wandering_vertices(&rat(7, 10)));
    assert_eq!(at(&int(1)), vec![RVec::from_ints(&[3, 2, 1])]);
    assert_eq!(rows.iter().filter(|r| r[0] == "0/1").count(), 6);

    let (code, report) = json_stdout(&["polytope", &problem("wandering.txt"), "--sweep", "3/10", "7/10", "1"]);
    assert_eq!(code, 0);
    let sweep = report["results"]["sweep"].as_array().unwrap();
    assert_eq!(sweep.len(), 2);
    assert_eq!(rational(&sweep[0]["lambda"]), rat(3, 10));
    assert_eq!(point(&sweep[0]["d"]), RVec::from_fracs(&[(23, 10), (2, 1), (17, 10)]));
    let got = sorted(sweep[0]["vertices"].as_array().unwrap().iter().map(|v| point(&v["point"])).collect());
    assert_eq!(got, wandering_vertices(&rat(3, 10)));
}

#[test]
fn sweep_needs_an_end_weight() {
    let out = dmajor(&["polytope", &problem("example2.txt"), "--sweep", "0", "1", "2"], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("d_end"));
}

#[test]
fn hausdorff_of_a_file_with_itself_is_zero() {
    let f = problem("example2.txt");
    let (code, report) = json_stdout(&["hausdorff", &f, &f]);
    assert_eq!(code, 0);
    let r = &report["results"];
    assert_eq!(r["distance"], Value::String("0/1".into()));
    assert_eq!(r["bound_check"]["holds"], Value::Bool(true));
    assert_eq!(r["nonexpansive"]["holds"], Value::Bool(true));
}

#[test]
fn hausdorff_between_weights() {
    let dir = TempDir::new().unwrap();
    let classical = scratch(&dir, "e.txt", "y = 4 -2 2\nd = 1 1 1\n");
    let (code, report) = json_stdout(&["hausdorff", &classical, &problem("example2.txt")]);
    assert_eq!(code, 0);
    let y = RVec::from_ints(&[4, -2, 2]);
    let oracle = hausdorff(
        &dmaj_vertices(&y, &WeightVec::uniform(3)).unwrap(),
        &dmaj_vertices(&y, &WeightVec::from_ints(&[4, 2, 1]).unwrap()).unwrap(),
    )
    .unwrap();
    let r = &report["results"];
    assert_eq!(rational(&r["distance"]), oracle.distance);
    assert!(oracle.distance > int(0));
    assert_eq!(r["bound_check"]["holds"], Value::Bool(true));
    assert_eq!(r["nonexpansive"], Value::Null);

    let a = scratch(&dir, "a.txt", "y = 3 2 1\nd = 23/10 2 17/10\n");
    let b = scratch(&dir, "b.txt", "y = 3 2 1\nd = 2.7 2 1.3\n");
    let (code, report) = json_stdout(&["hausdorff", &a, &b]);
    assert_eq!(code, 0);
    let dl = |l: Rational| WeightVec::new(RVec::new(vec![int(2) + &l, int(2), int(2) - &l])).unwrap();
    let y = RVec::from_ints(&[3, 2, 1]);
    let oracle = hausdorff(
        &dmaj_vertices(&y, &dl(rat(3, 10))).unwrap(),
        &dmaj_vertices(&y, &dl(rat(7, 10))).unwrap(),
    )
    .unwrap();
    assert_eq!(rational(&report["results"]["distance"]), oracle.distance);
    assert!(oracle.distance > int(0));
}

#[test]
fn hausdorff_rejects_dimension_mismatch() {
    let dir = TempDir::new().unwrap();
    let small = scratch(&dir, "s.txt", "y = 1 2\nd = 1 1\n");
    let out = dmajor(&["hausdorff", &small, &problem("example2.txt")], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("dimension mismatch"));
}

#[test]
fn sd3_catalogs() {
    let (code, report) = json_stdout(&["sd3", &problem("wide.txt")]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["regime"], Value::String("wide".into()));
    let matrices = report["results"]["matrices"].as_array().unwrap();
    assert_eq!(matrices.len(), 10);
    assert!(matrices.iter().all(|m| m["extreme"] == Value::Bool(true)));

    let (code, report) = json_stdout(&["sd3", &problem("narrow.txt")]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["regime"], Value::String("narrow".into()));
    assert_eq!(report["results"]["matrices"].as_array().unwrap().len(), 13);

    let dir = TempDir::new().unwrap();
    let degenerate = scratch(&dir, "deg.txt", "d = 2 2 1\n");
    let out = dmajor(&["sd3", &degenerate], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("d1 > d2 > d3"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let dir = TempDir::new().unwrap();
    let file = scratch(&dir, "bad.txt", "# header\ny = 1 2 3\nd = 1, 2x, 3\n");
    let out = dmajor(&["polytope", &file], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(&format!("{file}:3:8:")), "{}", out.stderr);

    let file = scratch(&dir, "neg.txt", "y = 1 2 3\nd = 1 -2 3\n");
    let out = dmajor(&["check", &file], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains(&format!("{file}:2:7:")), "{}", out.stderr);

    let file = scratch(&dir, "nox.txt", "y = 1 2 3\nd = 1 2 3\n");
    let out = dmajor(&["check", &file], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("missing key `x`"));
}

#[test]
fn json_problem_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    let file = scratch(&dir, "p.json", r#"{"y": ["4", "-2", "2"], "d": [4, 2, 1], "x": ["4", 0, 0]}"#);
    let (code, report) = json_stdout(&["check", &file]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["holds"], Value::Bool(true));
}

#[test]
fn curve_csv_has_elbows() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("curve.csv");
    let out = dmajor(&["polytope", &problem("example2.txt"), "--curve", csv_path.to_str().unwrap()], &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("c,f"));
    let rows: Vec<(Rational, Rational)> = lines
        .map(|l| {
            let (c, f) = l.split_once(',').unwrap();
            (parse_rational(c).unwrap(), parse_rational(f).unwrap())
        })
        .collect();
    assert_eq!(rows.first(), Some(&(int(0), int(0))));
    assert_eq!(rows.last(), Some(&(int(7), int(4))));
    let refined = dmajor(
        &["polytope", &problem("example2.txt"), "--curve", csv_path.to_str().unwrap(), "--refine", "2"],
        &[],
    );
    assert_eq!(refined.code, 0);
    assert!(std::fs::read_to_string(&csv_path).unwrap().lines().count() > rows.len() + 1);
}

#[test]
fn svg_only_in_three_dimensions() {
    let dir = TempDir::new().unwrap();
    let svg_path = dir.path().join("p.svg");
    let out = dmajor(&["polytope", &problem("example2.txt"), "--svg", svg_path.to_str().unwrap()], &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("σ = ").count(), 6);

    let four = scratch(&dir, "four.txt", "y = 1 2 3 4\nd = 1 1 1 1\n");
    let out = dmajor(&["polytope", &four, "--svg", svg_path.to_str().unwrap()], &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("n = 3"));
}

#[test]
fn dimension_cap_follows_environment() {
    let dir = TempDir::new().unwrap();
    let four = scratch(&dir, "four.txt", "y = 1 2 3 4\nd = 1 1 1 1\n");
    let out = dmajor(&["polytope", &four, "--vertices"], &[("DMAJOR_MAX_N", "3")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("DMAJOR_MAX_N"));
    let out = dmajor(&["polytope", &four, "--vertices"], &[]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("24 vertices"));
    let out = dmajor(&["polytope", &four, "--vertices"], &[("DMAJOR_MAX_N", "lots")]);
    assert_eq!(out.code, 2);
}

#[test]
fn verify_agrees_with_generic_enumeration() {
    let (code, report) = json_stdout(&["polytope", &problem("negative_y.txt"), "--verify"]);
    assert_eq!(code, 0);
    assert_eq!(report["results"]["verified"], Value::Bool(true));
    assert_eq!(report["results"]["vertices"].as_array().unwrap().len(), 5);
}
