use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use echcomb::lattice::int;
use echcomb::random::fixtures;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_echcomb"))
}

fn profile_a() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../echcomb/tests/data/profile_a.json")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn validate_profile_a() {
    let o = run(&["validate", "--profile", profile_a().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("valid: interval profile, 6 families"));
}

#[test]
fn invalid_profile_exits_one_with_diagnostics() {
    let dir = TempDir::new().unwrap();
    let mut p = fixtures::convex_circle(
        &[echcomb::lattice::Vec2::new(-2, -2), echcomb::lattice::Vec2::new(2, -2), echcomb::lattice::Vec2::new(2, 2), echcomb::lattice::Vec2::new(-2, 2)],
        int(6),
    );
    p.winding = 0;
    let f = write(&dir, "bad.json", &p.to_json());
    let o = run(&["validate", "--profile", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("winding ≥ 1"), "{}", stderr(&o));
}

#[test]
fn malformed_document_names_line_or_field() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "broken.json", "{\n  \"geometry\": \"interval\",\n  \"L\": \"2\",\n  \"nodes\": [\n");
    let o = run(&["validate", "--profile", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let text = std::fs::read_to_string(profile_a()).unwrap().replacen("\"1/8\"", "\"one\"", 1);
    let f = write(&dir, "field.json", &text);
    let o = run(&["validate", "--profile", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nodes[0].x"), "{}", stderr(&o));
}

#[test]
fn dsq_on_profile_a() {
    let o = run(&["dsq", "--profile", profile_a().to_str().unwrap(), "--class", "2,0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("d²=0: OK"));
}

#[test]
fn bad_class_and_bound_are_input_errors() {
    let p = profile_a();
    let p = p.to_str().unwrap();
    assert_eq!(run(&["generators", "--profile", p, "--class", "7"]).status.code(), Some(1));
    assert_eq!(run(&["generators", "--profile", p, "--bound", "9"]).status.code(), Some(1));
    assert_eq!(run(&["generators", "--profile", p, "--bound", "x/y"]).status.code(), Some(1));
    assert_eq!(run(&["generators"]).status.code(), Some(1));
}

#[test]
fn generators_of_class_one_zero() {
    let o = run(&["generators", "--profile", profile_a().to_str().unwrap(), "--class", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().skip(2).map(str::to_string).collect();
    assert_eq!(rows.len(), 6);
    let mut labels: Vec<&str> = rows.iter().map(|r| r.split('\t').nth(1).unwrap()).collect();
    labels.sort();
    assert_eq!(labels, ["e0", "e3", "e4", "h0", "h3", "h4"]);
}

#[test]
fn saved_matrix_gives_the_same_homology() {
    let dir = TempDir::new().unwrap();
    let s3 = write(&dir, "s3.json", &fixtures::s3_convex_domain(int(80)).to_json());
    let s3 = s3.to_str().unwrap();
    let out = dir.path().join("out");
    let o = run(&["matrix", "--profile", s3, "--class", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let m = out.join("matrix-0.txt");
    assert!(m.exists());
    assert!(out.join("generators-0.tsv").exists());
    let via_file = run(&["homology", "--profile", s3, "--class", "0", "--matrix", m.to_str().unwrap()]);
    let direct = run(&["homology", "--profile", s3, "--class", "0"]);
    assert_eq!(via_file.status.code(), Some(0), "{}", stderr(&via_file));
    assert_eq!(stdout(&via_file), stdout(&direct));
    // far below the cutoff the filtered groups are one copy of F in each even degree
    let direct_out = stdout(&direct);
    let low: Vec<&str> = direct_out.lines().filter(|l| !l.starts_with('#')).take(6).collect();
    assert_eq!(low, ["0\t0\t1", "0\t2\t1", "0\t3\t0", "0\t4\t1", "0\t5\t0", "0\t6\t1"], "{direct_out}");
}

#[test]
fn mismatched_matrix_is_rejected() {
    let dir = TempDir::new().unwrap();
    let m = write(&dir, "m.txt", "2 2\n1 0\n");
    let o = run(&["homology", "--profile", profile_a().to_str().unwrap(), "--class", "1,0", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn non_differential_matrix_is_an_invariant_violation() {
    let dir = TempDir::new().unwrap();
    // three generators of class (1,0) wired into a chain of two arrows
    let text = "6 6\n1 0\n2 1\n";
    let m = write(&dir, "chain.txt", text);
    let o = run(&["homology", "--profile", profile_a().to_str().unwrap(), "--class", "1,0", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn phi_check_on_s3() {
    let dir = TempDir::new().unwrap();
    let s3 = write(&dir, "s3.json", &fixtures::s3_convex_domain(int(80)).to_json());
    let o = run(&["phi-check", "--profile", s3.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("alpha-id\tindex-lens\tindex-t3\tmatch\tboundary-match"));
    assert!(out.trim_end().ends_with("generators)"));
    let o = run(&["phi-check", "--profile", profile_a().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn render_third_region() {
    let dir = TempDir::new().unwrap();
    let pa = profile_a();
    let args = ["render", "--profile", pa.to_str().unwrap(), "--alpha", "h0 e2", "--beta", "h1 h3"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let svg = stdout(&a);
    assert_eq!(svg.matches("<text class=\"label").count(), 4);
    assert_eq!(svg.matches("class=\"sigma\"").count(), 3);
    assert_eq!(svg.matches("<polygon").count(), 1);
    for l in ["ȟ x=1/8", "ê x=3/8", "ȟ x=1/4", "ĥ x=1/2"] {
        assert!(svg.contains(l), "{l}");
    }
    assert_eq!(stdout(&run(&args)), svg);

    let out = dir.path().join("svg");
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", out.to_str().unwrap()]);
    assert_eq!(run(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out.join("region.svg")).unwrap(), svg);
}

#[test]
fn render_empty_region_draws_axes_only() {
    let o = run(&["render", "--profile", profile_a().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = stdout(&o);
    assert_eq!(svg.matches("class=\"axis\"").count(), 2);
    assert!(!svg.contains("<polygon"));
    assert!(!svg.contains("<text"));
    assert!(!svg.contains("class=\"sigma\""));
}

#[test]
fn render_rejects_unknown_orbits() {
    let o = run(&["render", "--profile", profile_a().to_str().unwrap(), "--alpha", "q9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_subset() {
    let o = run(&["selftest", "--seed", "7", "--only", "1,5,6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.starts_with("selftest seed 7"));
    assert_eq!(out.lines().filter(|l| l.starts_with("criterion")).count(), 3);
    assert!(out.contains("3/3 suites passed"));
    assert_eq!(run(&["selftest", "--only", "11"]).status.code(), Some(1));
}
