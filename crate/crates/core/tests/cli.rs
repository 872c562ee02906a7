//! End-to-end checks of the command-line surface: subcommands, exit
//! codes, report determinism, and the JSON file formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_parayb")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmpdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("parayb-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn demo_prints_reference_values_and_exits_zero() {
    let out = run(&["demo", "--paper-example", "good1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("3 = 3"), "{text}");
    assert!(text.contains("3 = 7"), "{text}");
}

#[test]
fn verify_shelf_trivial_passes() {
    let dir = tmpdir();
    let path = dir.join("trivial.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "Y": [0, 1], "family":
            [[[[0,1,2],[0,1,2],[0,1,2]],[[0,1,2],[0,1,2],[0,1,2]]],
             [[[0,1,2],[0,1,2],[0,1,2]],[[0,1,2],[0,1,2],[0,1,2]]]]}"#,
    )
    .unwrap();
    let out = run(&["verify-shelf", path.to_str().unwrap(), "--rack"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("[pass] p-rack"));
}

#[test]
fn perturbed_solution_fails_with_least_counterexample() {
    let dir = tmpdir();
    let sol = dir.join("sol.json");
    let d = dir.to_str().unwrap();
    // build the mod-8 twisted solution, then corrupt one tau slot
    assert!(run_in(
        &dir,
        &[
            "brace",
            "cyclic",
            "--m",
            "3",
            "--xi",
            "3",
            "--emit",
            "shelf",
            "-o",
            "shelf.json"
        ]
    )
    .status
    .success());
    assert!(run_in(
        &dir,
        &[
            "brace",
            "cyclic",
            "--m",
            "3",
            "--xi",
            "3",
            "--emit",
            "sigma",
            "-o",
            "sigma.json"
        ]
    )
    .status
    .success());
    let _ = d;
    assert!(run_in(
        &dir,
        &[
            "build",
            "--shelf",
            "shelf.json",
            "--sigma",
            "sigma.json",
            "-o",
            sol.to_str().unwrap()
        ]
    )
    .status
    .success());
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    // swap two entries in tau[0][0][0]
    let row = v["tau"][0][0][0].as_array().unwrap().clone();
    v["tau"][0][0][0][0] = row[1].clone();
    v["tau"][0][0][0][1] = row[0].clone();
    std::fs::write(&sol, serde_json::to_string(&v).unwrap()).unwrap();

    let out = run(&[
        "verify-solution",
        sol.to_str().unwrap(),
        "--method",
        "both",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cx = &report["checks"][0]["counterexample"];
    assert!(cx.is_object(), "counterexample missing: {report}");
    // lexicographically least: the corrupted slot is (z1, z2) = (0, 0),
    // so the first failing triple starts with z = [0, 0, ...]
    assert_eq!(cx["zs"][0], 0);
    assert_eq!(cx["zs"][1], 0);
}

#[test]
fn malformed_json_exits_two_with_position() {
    let dir = tmpdir();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"n\": 2,\n  nope").unwrap();
    let out = run(&["verify-shelf", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn json_report_is_byte_identical_across_runs() {
    let dir = tmpdir();
    let shelf = dir.join("s.json");
    assert!(run(&[
        "brace",
        "cyclic",
        "--m",
        "3",
        "--xi",
        "3",
        "--emit",
        "shelf",
        "-o",
        shelf.to_str().unwrap()
    ])
    .status
    .success());
    let args = [
        "verify-shelf",
        shelf.to_str().unwrap(),
        "--rack",
        "--format",
        "json",
        "--jobs",
        "1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b), "reports differ between runs");
}

#[test]
fn verdicts_identical_across_job_counts() {
    let dir = tmpdir();
    let sol = dir.join("sol-jobs.json");
    assert!(run_in(
        &dir,
        &["brace", "cyclic", "--m", "3", "--xi", "5", "--emit", "shelf", "-o", "sh5.json"]
    )
    .status
    .success());
    assert!(run_in(
        &dir,
        &["brace", "cyclic", "--m", "3", "--xi", "5", "--emit", "sigma", "-o", "sg5.json"]
    )
    .status
    .success());
    assert!(run_in(
        &dir,
        &[
            "build",
            "--shelf",
            "sh5.json",
            "--sigma",
            "sg5.json",
            "-o",
            sol.to_str().unwrap()
        ]
    )
    .status
    .success());
    let one = run(&[
        "verify-solution",
        sol.to_str().unwrap(),
        "--format",
        "json",
        "--jobs",
        "1",
    ]);
    let four = run(&[
        "verify-solution",
        sol.to_str().unwrap(),
        "--format",
        "json",
        "--jobs",
        "4",
    ]);
    assert_eq!(one.status.code(), four.status.code());
    let ja: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    let jb: serde_json::Value = serde_json::from_str(&stdout(&four)).unwrap();
    assert_eq!(ja["checks"], jb["checks"]);
}

#[test]
fn enumerate_emits_json_lines() {
    let out = run(&["enumerate", "--n", "2", "--m", "1", "--rack"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2, "{lines:?}");
    for line in lines {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["n"], 2);
    }
    // report lands on stderr with the self-check
    assert!(stderr(&out).contains("emitted-families-verified"));
}

#[test]
fn tensor_and_coalgebra_commands_run_on_a_bundle() {
    let dir = tmpdir();
    let bundle = dir.join("bundle.json");
    assert!(run(&[
        "brace",
        "cyclic",
        "--m",
        "3",
        "--xi",
        "3",
        "--emit",
        "bundle",
        "-o",
        bundle.to_str().unwrap()
    ])
    .status
    .success());
    for sub in ["ybe", "frt", "commute", "twist"] {
        let out = run(&["tensor", sub, bundle.to_str().unwrap()]);
        assert!(out.status.success(), "tensor {sub}: {}", stderr(&out));
    }
    // the weak recursions need the identity twist element
    let unit_bundle = dir.join("bundle1.json");
    assert!(run(&[
        "brace",
        "cyclic",
        "--m",
        "3",
        "--xi",
        "1",
        "--emit",
        "bundle",
        "-o",
        unit_bundle.to_str().unwrap()
    ])
    .status
    .success());
    let out = run(&[
        "coalgebra",
        "coassoc",
        unit_bundle.to_str().unwrap(),
        "--arity",
        "3",
        "--weak",
        "--zo",
        "0",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "coalgebra",
        "transfer",
        unit_bundle.to_str().unwrap(),
        "--arity",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report = stdout(&out);
    assert!(report.contains("[pass] transfer-q-collapse"), "{report}");
    assert!(report.contains("[pass] transfer-commutators"), "{report}");
    assert!(
        report.contains("[pass] transfer-factorizations"),
        "{report}"
    );
    assert!(
        report.contains("bullet associativity compatibility: fails"),
        "{report}"
    );
    let out = run(&["coalgebra", "intertwine", bundle.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&["coalgebra", "trees", "--arity", "4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("digraph"));
}

#[test]
fn budget_flag_truncates_and_reports() {
    let dir = tmpdir();
    let shelf = dir.join("big.json");
    assert!(run(&[
        "brace",
        "cyclic",
        "--m",
        "4",
        "--xi",
        "3",
        "--emit",
        "shelf",
        "-o",
        shelf.to_str().unwrap()
    ])
    .status
    .success());
    let out = run(&[
        "verify-shelf",
        shelf.to_str().unwrap(),
        "--budget",
        "1000",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["checks"][0]["complete"], false);
}

#[test]
fn sampled_verification_is_seeded() {
    let dir = tmpdir();
    let sol = dir.join("sampled.json");
    assert!(run_in(
        &dir,
        &["brace", "cyclic", "--m", "3", "--xi", "3", "--emit", "shelf", "-o", "shs.json"]
    )
    .status
    .success());
    assert!(run_in(
        &dir,
        &["brace", "cyclic", "--m", "3", "--xi", "3", "--emit", "sigma", "-o", "sgs.json"]
    )
    .status
    .success());
    assert!(run_in(
        &dir,
        &[
            "build",
            "--shelf",
            "shs.json",
            "--sigma",
            "sgs.json",
            "-o",
            sol.to_str().unwrap()
        ]
    )
    .status
    .success());
    let a = run(&[
        "verify-solution",
        sol.to_str().unwrap(),
        "--sample",
        "64",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    let b = run(&[
        "verify-solution",
        sol.to_str().unwrap(),
        "--sample",
        "64",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}
