use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use dissect_core::PointConfiguration;

fn dissect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dissect"))
        .args(args)
        .env_remove("DISSECT_NODE_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    })
}

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Runs `gen` and returns the polytope and simplex paths.
    fn gen(&self, name: &str, flags: &[&str], construction: Option<&str>) -> (PathBuf, PathBuf) {
        let (poly, simp) = (self.path(&format!("{name}.txt")), self.path(&format!("{name}.simp")));
        let mut args = vec!["gen", "--out", s(&poly)];
        args.extend_from_slice(flags);
        if let Some(c) = construction {
            args.extend_from_slice(&["--construction", c, "--simplices-out", s(&simp)]);
        }
        let o = dissect(&args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (poly, simp)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_files_round_trip_byte_for_byte() {
    let ws = Workspace::new();
    for (name, flags, points) in [
        ("prism6", &["--family", "prism", "--m", "6", "--coords", "parabola"][..], 12),
        ("lattice", &["--family", "lattice-p"][..], 8),
        ("pm8", &["--family", "pm", "--m", "8"][..], 12),
    ] {
        let (poly, _) = ws.gen(name, flags, None);
        let text = std::fs::read_to_string(&poly).unwrap();
        let config = PointConfiguration::parse(&text).unwrap();
        assert_eq!(config.len(), points, "{name}");
        assert_eq!(config.to_text(), text, "{name}");
    }
}

#[test]
fn lattice_coordinates_are_exact() {
    let ws = Workspace::new();
    let (poly, _) = ws.gen("lattice", &["--family", "lattice-p"], None);
    let text = std::fs::read_to_string(poly).unwrap();
    assert!(text.lines().skip(1).all(|l| !l.contains('/')), "{text}");
    let config = PointConfiguration::parse(&text).unwrap();
    assert_eq!(config.total_volume().unwrap(), dissect_core::exactgeom::int(2));
}

#[test]
fn validate_reports_status_size_and_regions() {
    let ws = Workspace::new();
    let (poly, simp) = ws.gen("trap", &["--family", "trapezoid-cube"], Some("trapezoid7"));
    let o = dissect(&["validate", s(&poly), s(&simp), "--expect", "triangulation"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["report"]["status"], "TRIANGULATION");
    assert_eq!(r["outputs"]["report"]["size"], 7);
    assert_eq!(r["outputs"]["volume_deficit"], "0");

    let (poly, simp) = ws.gen("lat", &["--family", "lattice-p"], Some("lattice-dissection"));
    let o = dissect(&["validate", s(&poly), s(&simp), "--expect", "dissection"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["report"]["status"], "DISSECTION");
    assert_eq!(r["outputs"]["report"]["size"], 12);
    assert!(!r["outputs"]["report"]["regions"].as_array().unwrap().is_empty());
}

#[test]
fn truncated_family_is_invalid_with_a_deficit() {
    let ws = Workspace::new();
    let (poly, simp) = ws.gen("trap", &["--family", "trapezoid-cube"], Some("trapezoid7"));
    let text = std::fs::read_to_string(&simp).unwrap();
    let kept: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#')).collect();
    let cut = ws.path("cut.simp");
    std::fs::write(&cut, kept[..kept.len() - 1].join("\n") + "\n").unwrap();
    let o = dissect(&["validate", s(&poly), s(&cut)]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["report"]["status"], "INVALID");
    assert_ne!(r["outputs"]["volume_deficit"], "0");
    let o = dissect(&["validate", s(&poly), s(&cut), "--expect", "triangulation"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn solve_reports_optimum_and_mismatch() {
    let ws = Workspace::new();
    let (poly, _) = ws.gen("anti", &["--family", "antiprism8-p"], None);
    let o = dissect(&["solve", s(&poly), "--mode", "tri", "--sense", "min", "--enumerate"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["outputs"]["solve"]["optimum"], 7);
    assert_eq!(r["outputs"]["solve"]["proven"], true);
    assert!(r["outputs"]["optima"]["count"].as_u64().unwrap() >= 2);
    let o = dissect(&["solve", s(&poly), "--mode", "diss", "--sense", "min", "--expect", "5"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["outputs"]["solve"]["optimum"], 6);
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let ws = Workspace::new();
    let (poly, _) = ws.gen("prism6", &["--family", "prism", "--m", "6", "--coords", "parabola"], None);
    let o = dissect(&["solve", s(&poly), "--mode", "tri", "--sense", "max", "--node-budget", "1"]);
    assert_eq!(code(&o), 3);
    let r = json(&o);
    assert_eq!(r["outcome"], "budget-exhausted");
    assert_eq!(r["outputs"]["solve"]["proven"], false);
}

#[test]
fn reports_are_reproducible_apart_from_timing() {
    let ws = Workspace::new();
    let (poly, _) = ws.gen("lat", &["--family", "lattice-p"], None);
    let run = || {
        let mut r = json(&dissect(&["solve", s(&poly), "--mode", "diss", "--sense", "max"]));
        r.as_object_mut().unwrap().remove("timing_ms");
        r
    };
    let first = run();
    assert_eq!(first["outputs"]["solve"]["optimum"], 12);
    assert_eq!(first, run());
}

#[test]
fn table_rows_cite_their_source() {
    let o = dissect(&["table", "prop23"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = json(&o);
    let rows = r["outputs"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert!(!row["source"].as_str().unwrap().is_empty());
        assert_eq!(row["coords_hash"].as_str().unwrap().len(), 64);
    }
    let found: Vec<u64> = rows.iter().map(|r| r["computed"].as_u64().unwrap()).collect();
    assert_eq!(&found[..2], &[12, 11]);
    assert_eq!(&found[4..], &[6, 7, 9, 10]);
}

#[test]
fn errors_exit_with_usage_or_failure_codes() {
    let ws = Workspace::new();
    let out = ws.path("x.txt");
    assert_eq!(code(&dissect(&["gen", "--family", "dodecagon", "--out", s(&out)])), 2);
    assert_eq!(code(&dissect(&["gen", "--family", "prism", "--m", "2", "--out", s(&out)])), 1);
    let missing = ws.path("missing.txt");
    assert_eq!(code(&dissect(&["solve", s(&missing), "--mode", "tri", "--sense", "min"])), 1);
    let bad = ws.path("bad.txt");
    std::fs::write(&bad, "3 2\n0 0 0\n1 x 0\n").unwrap();
    let o = dissect(&["solve", s(&bad), "--mode", "tri", "--sense", "min"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}
