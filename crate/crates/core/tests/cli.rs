use std::path::Path;
use std::process::{Command, Output};

use almost_normal::cli::MatrixFile;
use almost_normal::gallery::perturbed_normal;
use serde_json::Value;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_almost-normal"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    run(dir, args).status.code().expect("exit code")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Data rows of a CSV report (preamble and header skipped).
fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    lines.next().expect("header");
    lines.map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn usage_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(code(d, &[]), 2);
    assert_eq!(code(d, &["gallery", "shift", "--m", "7", "--out", "x.json"]), 2);
    assert_eq!(
        code(
            d,
            &["gallery", "perturbed", "--dim", "3", "--delta", "-1", "--out", "x.json"]
        ),
        2
    );
    assert_eq!(code(d, &["nearest", "missing.json"]), 2);
    assert_eq!(
        code(d, &["truncate", "--window", "8", "--lambda", "5", "--out", "t.csv"]),
        2
    );

    ok(
        d,
        &["gallery", "normal", "--dim", "4", "--seed", "1", "--out", "n.json"],
    );
    assert_eq!(code(d, &["partition", "n.json", "--side", "0"]), 2);
    assert_eq!(
        code(
            d,
            &[
                "pseudospec",
                "n.json",
                "--eps",
                "0.1",
                "--half-width",
                "0.2",
                "--out",
                "p.csv"
            ]
        ),
        2
    );
}

#[test]
fn domain_errors_exit_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["gallery", "shift", "--m", "4", "--out", "s.json"]);
    assert_eq!(code(d, &["partition", "s.json", "--side", "0.5"]), 3);

    std::fs::write(d.join("diag.csv"), "0,0 ; 0,0\n0,0 ; 0.5,0\n").unwrap();
    let arc = [
        "surgery",
        "diag.csv",
        "--op",
        "remove-arc",
        "--center",
        "0,0",
        "--radius",
        "1",
    ];
    let mut off_chord = arc.to_vec();
    off_chord.extend(["--minus", "0,-1", "--plus", "0,1", "--out", "o.json"]);
    assert_eq!(code(d, &off_chord), 3);

    std::fs::write(d.join("cover.json"), r#"[{"kind":"disc","center":[5,5],"radius":0.1}]"#).unwrap();
    assert_eq!(code(d, &["partition", "diag.csv", "--cover", "cover.json"]), 3);
    assert_eq!(
        code(d, &["truncate", "--window", "8", "--lambda", "0", "--out", "t.csv"]),
        3
    );
}

#[test]
fn gallery_output_round_trips_bit_exactly() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(
        d,
        &[
            "gallery",
            "perturbed",
            "--dim",
            "7",
            "--delta",
            "0.3",
            "--seed",
            "42",
            "--out",
            "p.json",
        ],
    );
    let text = std::fs::read_to_string(d.join("p.json")).unwrap();
    assert_eq!(text.trim_end().lines().count(), 1);
    let file = MatrixFile::parse(&text).unwrap();
    assert_eq!(file.to_matrix().unwrap(), perturbed_normal(7, 0.3, 42).unwrap());
    assert_eq!(MatrixFile::parse(&file.to_json()).unwrap(), file);

    let header = file.header.expect("header");
    assert_eq!(header.version, almost_normal::cli::VERSION);
    assert_eq!(header.config["command"], "gallery");
    assert_eq!(header.config["seed"], 42);
}

#[test]
fn unknown_config_keys_are_rejected_and_configs_replay() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["gallery", "shift", "--m", "6", "--out", "s.json"]);
    let config = read_json(&d.join("s.json"))["header"]["config"].clone();
    let first = std::fs::read(d.join("s.json")).unwrap();
    std::fs::remove_file(d.join("s.json")).unwrap();

    std::fs::write(d.join("cfg.json"), config.to_string()).unwrap();
    ok(d, &["run", "--config", "cfg.json"]);
    assert_eq!(std::fs::read(d.join("s.json")).unwrap(), first);

    let mut bad = config.clone();
    bad["colour"] = Value::from("blue");
    std::fs::write(d.join("bad.json"), bad.to_string()).unwrap();
    assert_eq!(code(d, &["run", "--config", "bad.json"]), 2);
}

#[test]
fn nearest_on_shift_example() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["gallery", "shift", "--m", "8", "--out", "s.json"]);
    ok(
        d,
        &[
            "nearest",
            "s.json",
            "--p",
            "1,2,inf",
            "--out",
            "r.json",
            "--witness",
            "t.json",
        ],
    );
    let report = read_json(&d.join("r.json"));
    assert_eq!(report["header"]["config"]["command"], "nearest");
    let r = &report["report"];
    assert!((r["frobenius_exact"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);
    assert!((r["lower_bounds"]["inf"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let witness = MatrixFile::parse(&std::fs::read_to_string(d.join("t.json")).unwrap())
        .unwrap()
        .to_matrix()
        .unwrap();
    assert!(almost_normal::linalg::normality_defect(&witness) < 1e-10);
}

#[test]
fn gallery_pair_writes_both_matrices_and_bounds() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let stdout = ok(d, &["gallery", "pair", "--m", "10", "--out-dir", "pair"]);
    let report: Value = serde_json::from_str(&stdout).unwrap();
    let r = &report["report"];
    assert_eq!(r["norm_a"], 1.0);
    assert!(r["commutator_ab"].as_f64().unwrap() <= 0.2 * (1.0 + 1e-12));
    assert!(r["self_commutator_b"].as_f64().unwrap() <= 0.4 * (1.0 + 1e-12));
    for name in ["A.json", "B.json"] {
        let m = MatrixFile::parse(&std::fs::read_to_string(d.join("pair").join(name)).unwrap()).unwrap();
        assert_eq!(m.dim, 11);
    }
}

#[test]
fn surgery_pushes_spectrum_to_the_circle() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("diag.csv"), "0,0 ; 0,0\n0,0 ; 5,0\n").unwrap();
    let args = [
        "surgery",
        "diag.csv",
        "--op",
        "remove-disc",
        "--center",
        "0,0",
        "--radius",
        "1",
        "--anchor",
        "0,0",
        "--out",
        "o.json",
        "--report",
        "r.json",
    ];
    ok(d, &args);
    let out = MatrixFile::parse(&std::fs::read_to_string(d.join("o.json")).unwrap()).unwrap();
    assert_eq!(
        out.data,
        vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [5.0, 0.0]]]
    );
    let report = read_json(&d.join("r.json"));
    assert_eq!(report["report"]["moved_count"], 1);
}

#[test]
fn truncate_shift_symbol_rows_pass() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(
        d,
        &["truncate", "--window", "32", "--lambda", "4,8,12,16", "--out", "t.csv"],
    );
    let rows = csv_rows(&d.join("t.csv"));
    assert_eq!(rows.len(), 4);
    for row in &rows {
        assert_eq!(row[8], "true");
        assert_eq!(row[6].parse::<f64>().unwrap(), 2.0);
    }
}

#[test]
fn pseudospec_of_diagonal_counts_the_neighbourhood() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    std::fs::write(d.join("diag.csv"), "0,0 ; 0,0\n0,0 ; 1,0\n").unwrap();
    ok(
        d,
        &[
            "pseudospec",
            "diag.csv",
            "--eps",
            "0.1",
            "--resolution",
            "101",
            "--out",
            "m.csv",
            "--report",
            "r.json",
        ],
    );
    let members = csv_rows(&d.join("m.csv"));

    let grid = &read_json(&d.join("r.json"))["report"]["grid"];
    let (cx, cy) = (grid["center"][0].as_f64().unwrap(), grid["center"][1].as_f64().unwrap());
    let h = grid["half_width"].as_f64().unwrap();
    let n = grid["resolution"].as_u64().unwrap() as usize;
    let step = 2.0 * h / (n - 1) as f64;
    let mut expected = 0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (cx - h + j as f64 * step, cy - h + i as f64 * step);
            if x.hypot(y).min((x - 1.0).hypot(y)) < 0.1 {
                expected += 1;
            }
        }
    }
    assert!(expected > 0);
    assert_eq!(members.len(), expected);
}

#[test]
fn scatter_over_shift_examples_has_constant_ratio() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["scatter", "--shift", "2,4,8,16,32,64", "--out", "s.csv"]);
    let rows = csv_rows(&d.join("s.csv"));
    assert_eq!(rows.len(), 6);
    for row in rows {
        let ratio: f64 = row.last().unwrap().parse().unwrap();
        assert!((ratio - 0.5).abs() < 1e-8, "{row:?}");
    }
}
