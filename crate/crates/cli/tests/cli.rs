use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tdom_cli::{run, ExitStatus};
use tdom_core::canonical::corpus;

struct Out {
    status: ExitStatus,
    stdout: String,
    stderr: String,
}

fn tdom(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let status = run(
        std::iter::once("tdom").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Out {
        status,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn canonical(dir: &Path) -> String {
    write(dir, "canonical.tdom", corpus().text)
        .display()
        .to_string()
}

#[test]
fn validate_canonical_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let r = tdom(&["validate", &canonical(dir.path())]);
    assert_eq!(r.status, ExitStatus::Success);
    assert_eq!(r.stdout, "0 error(s), 0 warning(s)\n");
}

#[test]
fn validate_reports_rule_violations() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.tdom",
        "task \"t\" id T1\naction T1-1 \"x\" M: G N | G: N N | NPE: R | NPA: N N | CS: N A N | D: N | S: N | US: N\n",
    );
    let r = tdom(&["validate", f.to_str().unwrap()]);
    assert_eq!(r.status, ExitStatus::Failure);
    assert!(r.stdout.contains("ERROR R1_SlidingRequiresContact T1-1"));
    assert!(r.stdout.contains("(2:8)"));
    assert!(r.stdout.ends_with("1 error(s), 0 warning(s)\n"));
}

#[test]
fn warnings_do_not_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "warn.tdom",
        "task \"t\" id T1\naction T1-1 \"x\" M: G N | G: P N | NPE: N | NPA: N N | CS: N N N | D: TN | S: N | US: N\n",
    );
    let r = tdom(&["validate", f.to_str().unwrap()]);
    assert_eq!(r.status, ExitStatus::Success);
    assert!(r.stdout.contains("WARNING R3_TensionNeedsTwoConstraints"));
}

#[test]
fn parse_errors_and_missing_files_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "broken.tdom",
        "task \"t\" id T1\naction T1-1 \"x\" M: Q N\n",
    );
    let r = tdom(&["validate", f.to_str().unwrap()]);
    assert_eq!(r.status, ExitStatus::Input);
    assert!(r.stderr.contains("broken.tdom: ERROR"));
    let missing = dir.path().join("nope.tdom");
    assert_eq!(
        tdom(&["cluster", missing.to_str().unwrap(), "--view", "tdom"]).status,
        ExitStatus::Input
    );
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tdom(&["frobnicate"]).status, ExitStatus::Usage);
    assert_eq!(
        tdom(&["cluster", "x.tdom", "--view", "paulius"]).status,
        ExitStatus::Usage
    );
    assert_eq!(
        tdom(&["cluster", "x.tdom", "--view", "tdom", "--bogus"]).status,
        ExitStatus::Usage
    );
    let r = tdom(&["project", "x.tdom", "--view", "tdom"]);
    assert_eq!(r.status, ExitStatus::Usage);
    assert!(r.stderr.contains("baseline"));
    let help = tdom(&["--help"]);
    assert_eq!(help.status, ExitStatus::Success);
    assert!(help.stdout.contains("validate"));
}

#[test]
fn cluster_table_shows_four_multi_member_clusters() {
    let dir = tempfile::tempdir().unwrap();
    let r = tdom(&[
        "cluster",
        &canonical(dir.path()),
        "--view",
        "tdom",
        "--format",
        "table",
    ]);
    assert_eq!(r.status, ExitStatus::Success);
    let row: Vec<&str> = r
        .stdout
        .lines()
        .nth(1)
        .unwrap()
        .split_whitespace()
        .collect();
    assert_eq!(row, ["tdom", "56", "4", "2"]);
    assert!(r.stdout.contains("T1-6 T2-2"));
}

#[test]
fn mask_deformation_equals_the_ablation_view() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical(dir.path());
    for format in ["table", "csv"] {
        let masked = tdom(&[
            "cluster",
            &file,
            "--view",
            "tdom",
            "--format",
            format,
            "--mask-deformation",
        ]);
        let plain = tdom(&["cluster", &file, "--view", "tdom-nodef", "--format", format]);
        assert_eq!(masked.stdout, plain.stdout);
    }
    let masked = tdom(&[
        "graph",
        &file,
        "--view",
        "tdom",
        "--mask-deformation",
        "--stdout",
    ]);
    let plain = tdom(&["graph", &file, "--view", "tdom-nodef", "--stdout"]);
    assert_eq!(masked.stdout, plain.stdout);
    assert!(masked.stdout.starts_with("graph \"tdom-nodef\" {"));
}

#[test]
fn segment_lanes_for_edge_tracing() {
    let dir = tempfile::tempdir().unwrap();
    let r = tdom(&[
        "segment",
        &canonical(dir.path()),
        "--task",
        "T4",
        "--views",
        "tdom,bullock,paulius-segment",
    ]);
    assert_eq!(r.status, ExitStatus::Success);
    let lanes: Vec<&str> = r.stdout.lines().skip(2).take(3).collect();
    assert!(lanes[0].starts_with("tdom ") && lanes[0].ends_with("  3"));
    assert!(lanes[1].starts_with("bullock ") && lanes[1].ends_with("  3"));
    assert!(lanes[2].starts_with("paulius-segment ") && lanes[2].ends_with("  1 (constant)"));
    let missing = tdom(&["segment", &canonical(dir.path()), "--task", "T99"]);
    assert_eq!(missing.status, ExitStatus::Usage);
}

#[test]
fn dot_needs_an_explicit_destination() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical(dir.path());
    let r = tdom(&["cluster", &file, "--view", "bullock", "--format", "dot"]);
    assert_eq!(r.status, ExitStatus::Usage);
    assert!(r.stdout.is_empty());
    assert_eq!(
        tdom(&["graph", &file, "--view", "bullock"]).status,
        ExitStatus::Usage
    );

    let target = dir.path().join("g.dot");
    let r = tdom(&[
        "graph",
        &file,
        "--view",
        "bullock",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(r.status, ExitStatus::Success);
    assert!(r.stdout.is_empty());
    let dot = fs::read_to_string(&target).unwrap();
    assert!(dot.starts_with("graph \"bullock\" {") && dot.ends_with("}\n"));
    assert_eq!(
        dot,
        tdom(&["graph", &file, "--view", "bullock", "--stdout"]).stdout
    );
}

#[test]
fn palette_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical(dir.path());
    let palette = write(dir.path(), "p.toml", "[colors]\n\"N\" = \"#010203\"\n");
    let r = tdom(&[
        "graph",
        &file,
        "--view",
        "tdom",
        "--stdout",
        "--palette",
        palette.to_str().unwrap(),
    ]);
    assert!(r.stdout.contains("fillcolor=\"#010203\""));

    let bin = env!("CARGO_BIN_EXE_tdom");
    let out = Command::new(bin)
        .args(["graph", &file, "--view", "tdom", "--stdout"])
        .env("TDOM_PALETTE", &palette)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), r.stdout);

    let bad = write(dir.path(), "bad.toml", "[colors]\nN = \"blue\"\n");
    let r = tdom(&[
        "graph",
        &file,
        "--view",
        "tdom",
        "--stdout",
        "--palette",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(r.status, ExitStatus::Input);
}

#[test]
fn project_lists_every_action() {
    let dir = tempfile::tempdir().unwrap();
    let r = tdom(&["project", &canonical(dir.path()), "--view", "bullock"]);
    assert_eq!(r.status, ExitStatus::Success);
    assert_eq!(r.stdout.lines().count(), 60);
    let fold = r.stdout.lines().find(|l| l.starts_with("T1-4 ")).unwrap();
    assert!(fold.ends_with("L[C P | M NW | NA] R[NC | NM | -]"));
}

#[test]
fn bend_polyline_and_cloth() {
    let dir = tempfile::tempdir().unwrap();
    let rope = write(
        dir.path(),
        "loop.txt",
        "# one loop\n0 0 0\n2 0 0\n2 1 0.01\n0 1 0.01\n1 -0.5 0.02\n",
    );
    let r = tdom(&[
        "bend",
        "polyline",
        rope.to_str().unwrap(),
        "--direction",
        "0,0,1",
    ]);
    assert_eq!(r.status, ExitStatus::Success);
    assert!(r.stdout.starts_with("S: L1 | US: N"));

    let trefoil: String = (0..24)
        .map(|k| {
            let t = 2.0 * PI * (k as f64 + 0.5) / 24.0;
            let r = 2.0 + (3.0 * t).cos();
            format!(
                "{} {} {}\n",
                r * (2.0 * t).cos(),
                r * (2.0 * t).sin(),
                (3.0 * t).sin()
            )
        })
        .chain(["closed\n".to_string()])
        .collect();
    let knot = write(dir.path(), "trefoil.txt", &trefoil);
    let r = tdom(&["bend", "polyline", knot.to_str().unwrap()]);
    assert!(r.stdout.contains("US: L1") && r.stdout.contains("irreducible crossings 3"));
    let buckets = write(
        dir.path(),
        "b.toml",
        "[[bucket]]\nmin = 1\nmax = 2\nlevel = 1\n[[bucket]]\nmin = 3\nlevel = 4\n",
    );
    let r = tdom(&[
        "bend",
        "polyline",
        knot.to_str().unwrap(),
        "--buckets",
        buckets.to_str().unwrap(),
    ]);
    assert!(r.stdout.contains("US: L4"));

    assert_eq!(
        tdom(&[
            "bend",
            "polyline",
            rope.to_str().unwrap(),
            "--direction",
            "0,1"
        ])
        .status,
        ExitStatus::Usage
    );
    assert_eq!(
        tdom(&[
            "bend",
            "polyline",
            rope.to_str().unwrap(),
            "--direction",
            "0,0,0"
        ])
        .status,
        ExitStatus::Input
    );
    assert_eq!(
        tdom(&[
            "bend",
            "polyline",
            rope.to_str().unwrap(),
            "--direction",
            "1,0,0"
        ])
        .status,
        ExitStatus::Input
    );

    let napkin = write(
        dir.path(),
        "napkin.txt",
        "keypoint a accessible\nkeypoint b accessible\nkeypoint c occluded\nkeypoint d occluded\nwrinkled true\n",
    );
    let r = tdom(&["bend", "cloth", napkin.to_str().unwrap()]);
    assert!(r.stdout.starts_with("S: N | US: L2"));
    let empty = write(dir.path(), "empty.txt", "gfolds 1\n");
    assert_eq!(
        tdom(&["bend", "cloth", empty.to_str().unwrap()]).status,
        ExitStatus::Input
    );
}

#[test]
fn dataset_export() {
    let r = tdom(&["dataset", "export"]);
    assert_eq!(r.stdout, corpus().text);
    let json = tdom(&["dataset", "export", "--format", "json"]);
    let d = tdom_core::lang::from_json(&json.stdout).unwrap();
    assert_eq!(d, tdom_core::load_canonical().unwrap());
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("c.tdom");
    assert_eq!(
        tdom(&["dataset", "export", "-o", target.to_str().unwrap()]).status,
        ExitStatus::Success
    );
    assert_eq!(fs::read_to_string(target).unwrap(), corpus().text);
}

#[test]
fn report_covers_all_views_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = canonical(dir.path());
    let r = tdom(&["report", &file]);
    assert_eq!(r.status, ExitStatus::Success);
    for view in [
        "tdom",
        "tdom-nodef",
        "bullock",
        "paulius-segment",
        "paulius-cluster",
    ] {
        assert!(
            r.stdout.lines().any(|l| l.starts_with(&format!("{view} "))),
            "{view}"
        );
    }
    assert_eq!(tdom(&["report", &file]).stdout, r.stdout);
    let csv = tdom(&["report", &file, "--format", "csv"]);
    assert_eq!(csv.stdout.lines().count(), 6);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_tdom");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["dataset", "export"]), Some(0));
    assert_eq!(status(&["nope"]), Some(2));
    assert_eq!(status(&["validate", "/nonexistent/file.tdom"]), Some(3));
}
