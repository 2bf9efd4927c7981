//! The `pgq` binary: exit codes, report files and byte-stable output.

use std::path::PathBuf;
use std::process::{Command, Output};

fn pgq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pgq"))
        .args(args)
        .env("PGQ_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pgq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_of(args: &[&str]) -> String {
    let out = pgq(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn golden_reports() {
    let cases: [(&[&str], &str); 4] = [
        (
            &["census", "--n", "2", "--q", "2", "--sign", "+"],
            include_str!("golden/census_n2_q2_plus.json"),
        ),
        (
            &["hyperoval", "--q", "4"],
            include_str!("golden/hyperoval_q4.json"),
        ),
        (
            &["odd-spectrum", "--n", "2", "--q", "3", "--sign", "-"],
            include_str!("golden/odd_spectrum_n2_q3_minus.json"),
        ),
        (
            &["switch-search"],
            include_str!("golden/switch_search.json"),
        ),
    ];
    for (args, golden) in cases {
        let mut full = args.to_vec();
        full.push("--no-timings");
        assert_eq!(stdout_of(&full), golden, "{args:?}");
    }
}

#[test]
fn reports_are_stable_across_runs_and_worker_counts() {
    let a = stdout_of(&[
        "check-theorem",
        "--n",
        "2",
        "--q",
        "4",
        "--sign",
        "-",
        "--no-timings",
    ]);
    let b = stdout_of(&[
        "check-theorem",
        "--n",
        "2",
        "--q",
        "4",
        "--sign",
        "-",
        "--no-timings",
        "--workers",
        "1",
    ]);
    assert_eq!(a, b);
    let with = stdout_of(&["census", "--q", "2"]);
    assert!(with.contains("\"timings_ms\""));
}

#[test]
fn census_contents() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&["census", "--q", "2", "--no-timings"])).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["payload"]["sections"]["H+"], 10);
    assert_eq!(
        v["payload"]["colouring"]["histogram"],
        serde_json::json!({"0": 1, "4": 15, "6": 15})
    );
    assert_eq!(v["field"]["modulus"], serde_json::json!([0, 1]));
}

#[test]
fn hyperoval_contents() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout_of(&["hyperoval", "--q", "4", "--no-timings"])).unwrap();
    assert_eq!(v["payload"]["family_size"], 96);
    assert_eq!(
        v["payload"]["census"],
        serde_json::json!({"red": 6, "white": 15, "black": 320})
    );
    assert_eq!(v["payload"]["conclusion"]["branch"], "hyperoval");
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["census", "--q", "6"][..],
        &["census", "--q", "2", "--sign", "0"],
        &["odd-spectrum", "--q", "4"],
        &["hyperoval", "--q", "3"],
        &["hyperoval", "--q", "4", "--k", "2"],
        &["check-theorem", "--n", "1", "--q", "2"],
        &["check-theorem", "--q", "2", "--hyperoval", "--sign", "+"],
        &[
            "check-theorem",
            "--q",
            "2",
            "--family-file",
            "/nonexistent/family.txt",
        ],
        &["census", "--n", "3", "--q", "4", "--max-points", "100"],
        &["frobnicate"],
    ] {
        assert_eq!(pgq(args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(pgq(&["--help"]).status.code(), Some(0));
}

#[test]
fn family_files_drive_exit_codes() {
    // H- of Q(4,2): the six solids meeting Q in an elliptic quadric
    let good = tmp("good.txt");
    let json = tmp("good.json");
    let csv = tmp("good.csv");
    let text = stdout_of(&["census", "--q", "2", "--sign", "-", "--no-timings"]);
    assert!(text.contains("\"H-\": 6"));
    let family = "# H- of x0^2 + x1x2 + x3x4\n\
        1 0 0 1 1\n1 0 1 1 1\n1 1 0 1 1\n1 1 1 0 0\n1 1 1 0 1\n1 1 1 1 0\n";
    std::fs::write(&good, family).unwrap();
    let out = pgq(&[
        "check-theorem",
        "--q",
        "2",
        "--sign",
        "-",
        "--family-file",
        good.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(report["payload"]["family_size"], 6);
    let status = out.status.code();
    let branch = report["payload"]["conclusion"]["branch"].clone();
    assert_eq!(status, Some(0), "{report:#}");
    assert_eq!(branch, "quadric");
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.starts_with("spectrum,value,multiplicity\n"));

    // dropping a member breaks condition I
    let bad = tmp("bad.txt");
    std::fs::write(&bad, family.lines().take(6).collect::<Vec<_>>().join("\n")).unwrap();
    let out = pgq(&[
        "check-theorem",
        "--q",
        "2",
        "--sign",
        "-",
        "--family-file",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL condition I"));

    let garbled = tmp("garbled.txt");
    std::fs::write(&garbled, "1 0 0 1\n").unwrap();
    let out = pgq(&[
        "check-theorem",
        "--q",
        "2",
        "--family-file",
        garbled.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn switch_search_jsonl() {
    let path = tmp("switch.jsonl");
    let out = pgq(&[
        "switch-search",
        "--no-timings",
        "--jsonl",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 32768);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["mask"], 0);
    assert_eq!(first["passes"], true);
    assert_eq!(first["is_quadric"], true);
    let passing = lines
        .iter()
        .filter(|l| l.contains("\"passes\":true"))
        .count();
    assert_eq!(passing, 448);
}
