//! Subprocess integration tests: run the binary, check exit codes and
//! output for every subcommand and flag surface.

use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .args(args)
        .output()
        .expect("failed to run torsionlab");
    let code = output.status.code().unwrap_or(-1);
    let stdout = String::from_utf8_lossy(&output.stdout).to_string();
    let stderr = String::from_utf8_lossy(&output.stderr).to_string();
    (code, stdout, stderr)
}

#[test]
fn torsion_twist_table_row() {
    let (code, out, _) = run(&["torsion", "-D", "-7", "-c", "68121;69696", "-d", "-1", "--twist"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/2 x Z/4"), "{out}");
}

#[test]
fn torsion_base_minimal_curve() {
    let (code, out, _) = run(&["torsion", "-D", "-2", "-c", "1;2"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/2 x Z/2"), "{out}");
}

#[test]
fn torsion_extension_z6_z6() {
    let (code, out, _) = run(&[
        "torsion",
        "-D",
        "-7",
        "-c",
        "(21*w-39)/2;(-21*w-39)/2",
        "-d",
        "-3",
        "--ext",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/6 x Z/6"), "{out}");
}

#[test]
fn parse_error_exit_code() {
    let (code, _, err) = run(&["torsion", "-D", "-2", "-c", "1+$;2"]);
    assert_eq!(code, 2);
    assert!(err.contains("syntax error"), "{err}");
    // bad field
    let (code, _, _) = run(&["torsion", "-D", "-5", "-c", "1;2"]);
    assert_eq!(code, 2);
}

#[test]
fn math_error_exit_code() {
    let (code, _, err) = run(&["torsion", "-D", "-2", "-c", "1;1"]);
    assert_eq!(code, 3);
    assert!(err.contains("singular"), "{err}");
}

#[test]
fn classify_prints_criterion_and_branches() {
    let (code, out, _) = run(&["classify", "-D", "-7", "-c", "68121;69696"]);
    assert_eq!(code, 0);
    assert!(out.contains("Z/2 x Z/4"), "{out}");
    assert!(out.contains("z = 15*w"), "{out}");
    assert!(out.contains("Z/4 x Z/4"), "{out}");
    assert!(out.contains("Z/4 x Z/8"), "{out}");
    // D = -19, Z/2 x Z/8 branch is a singleton.
    let (code, out, _) = run(&["classify", "-D", "-19", "-c", "729;2304"]);
    assert_eq!(code, 0);
    assert!(out.contains("Phi_K(2, G): {Z/2 x Z/8}"), "{out}");
}

#[test]
fn verify_tables_run_clean() {
    for table in ["units", "modcurve", "jacobians"] {
        let (code, out, _) = run(&["verify-paper", "--table", table]);
        assert_eq!(code, 0, "table {table}: {out}");
        assert!(out.contains("failed"), "{out}");
        assert!(out.contains(" 0 failed"), "{out}");
    }
    let (code, _, err) = run(&["verify-paper", "--table", "nonsense"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown table"), "{err}");
}

#[test]
fn verify_json_lines_format() {
    let (code, out, _) = run(&["verify-paper", "--table", "units", "--format", "json-lines"]);
    assert_eq!(code, 0);
    for line in out.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("each line is JSON");
        assert!(v.get("check").is_some());
        assert!(v.get("status").is_some());
    }
}

#[test]
fn verify_is_deterministic() {
    let (c1, out1, _) = run(&["verify-paper", "--table", "modcurve"]);
    let (c2, out2, _) = run(&["verify-paper", "--table", "modcurve"]);
    assert_eq!(c1, 0);
    assert_eq!(c2, 0);
    assert_eq!(out1, out2, "repeated runs must be byte-identical");
}

#[test]
fn external_dataset_override() {
    let dir = std::env::temp_dir();
    let path = dir.join("torsionlab-mini-dataset.json");
    let mini = r#"{
      "entries": [
        {
          "id": "mini",
          "field": -2,
          "alpha": "-1",
          "beta": "-2",
          "base_group": { "m": 2, "n": 2 },
          "caption_group": { "m": 2, "n": 2 },
          "source": "test",
          "rows": [
            { "d": "-1", "twist_group": { "m": 2, "n": 2 }, "ext_group": { "m": 4, "n": 4 } }
          ]
        }
      ]
    }"#;
    std::fs::write(&path, mini).unwrap();
    let (code, out, _) = run(&[
        "verify-paper",
        "--table",
        "growth",
        "--dataset",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("mini"), "{out}");
    assert!(out.contains(" 0 failed"), "{out}");
    // invalid dataset
    let bad = dir.join("torsionlab-bad-dataset.json");
    std::fs::write(&bad, "{\"entries\": [{\"id\": 3}]}").unwrap();
    let (code, _, _) = run(&[
        "verify-paper",
        "--dataset",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn scan_reports_growth_rows() {
    let (code, out, _) = run(&["scan", "-D", "-2", "-c", "-1;-2", "--d-bound", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("base group: Z/2 x Z/2"), "{out}");
    assert!(out.contains("Z/4 x Z/4"), "{out}");
    // empty bound: no rows
    let (code, out, _) = run(&["scan", "-D", "-2", "-c", "-1;-2", "--d-bound", "0"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 rows"), "{out}");
}

#[test]
fn thread_env_is_accepted() {
    let output = Command::new(env!("CARGO_BIN_EXE_torsionlab"))
        .env("TORSIONLAB_THREADS", "2")
        .args(["verify-paper", "--table", "units"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
}
