//! End-to-end tests of the qgeo binary: flag parsing, printed values,
//! file outputs, and the exit-code contract (0 ok, 2 validation,
//! 3 deviation).

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgeo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qgeo_cli_{name}"));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn measure_pure_family_prints_known_values() {
    let out = qgeo(&["measure", "--family", "pure", "--alpha", "0.6"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("negativity  = 4.8000000000"), "{text}");
    assert!(text.contains("concurrence = 9.6000000000"), "{text}");
    assert!(text.contains("reduced A1 spectrum"), "{text}");
}

#[test]
fn measure_bell_family() {
    let out = qgeo(&["measure", "--family", "bell"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("negativity  = 5.0000000000"), "{text}");
    assert!(text.contains("concurrence = 1.0000000000"), "{text}");
}

#[test]
fn measure_product_state_file_gives_zero_measures() {
    let dir = tmpdir("measure_file");
    let path = dir.join("sep.json");
    // |01><01| written in the state-file schema.
    let mut re = vec![vec![0.0; 4]; 4];
    re[1][1] = 1.0;
    let json = format!(
        "{{\"dims\":[2,2],\"re\":{},\"im\":{}}}",
        serde_json::to_string(&re).unwrap(),
        serde_json::to_string(&vec![vec![0.0; 4]; 4]).unwrap()
    );
    fs::write(&path, json).unwrap();
    let out = qgeo(&["measure", "--file", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("negativity  = 0.0000000000"), "{text}");
    assert!(text.contains("concurrence = 0.0000000000"), "{text}");
}

#[test]
fn measure_missing_file_exits_2() {
    let out = qgeo(&["measure", "--file", "/nonexistent/state.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn measure_rejects_single_qubit_input_with_exit_2() {
    let dir = tmpdir("measure_qubit");
    let path = dir.join("qubit.json");
    fs::write(
        &path,
        r#"{"dims":[2],"re":[[0.5,0.0],[0.0,0.5]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = qgeo(&["measure", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metric_pure_alpha_06() {
    let out = qgeo(&[
        "metric",
        "--family",
        "pure",
        "--alpha",
        "0.6",
        "--generator",
        "sx",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("K       = 3.1360000000"), "{text}");
}

#[test]
fn metric_mems4_and_maximally_mixed_note() {
    let out = qgeo(&[
        "metric",
        "--family",
        "mems4",
        "--p2",
        "0.2",
        "--p4",
        "0.05",
        "--generator",
        "sx",
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("K       = 9.0000000000"),
        "{}",
        stdout(&out)
    );

    // p2 = p4 gives a maximally mixed subsystem: zero metric plus a note.
    let out = qgeo(&[
        "metric",
        "--family",
        "mems4",
        "--p2",
        "0.2",
        "--p4",
        "0.2",
        "--generator",
        "sy",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("K       = 0.0000000000"), "{text}");
    assert!(text.contains("note:"), "{text}");
}

#[test]
fn metric_accepts_single_qubit_file_and_generator_file() {
    let dir = tmpdir("metric_qubit");
    let state = dir.join("qubit.json");
    fs::write(
        &state,
        r#"{"dims":[2],"re":[[0.36,0.0],[0.0,0.64]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let generator = dir.join("gen.json");
    fs::write(
        &generator,
        r#"{"dims":[2],"re":[[0.0,1.0],[1.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = qgeo(&[
        "metric",
        "--file",
        state.to_str().unwrap(),
        "--generator",
        generator.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("K       = 3.1360000000"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn sweep_writes_csv_with_row_count() {
    let dir = tmpdir("sweep");
    let path = dir.join("pure.csv");
    let out = qgeo(&[
        "sweep",
        "--family",
        "pure",
        "--grid",
        "19",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("wrote 19 rows"), "{}", stdout(&out));
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 20);
    assert_eq!(lines[0], "alpha,negativity,concurrence,k_sx,k_sy,sqrt_k_sx");

    // Identical reruns are bitwise identical.
    let path2 = dir.join("pure2.csv");
    qgeo(&[
        "sweep",
        "--family",
        "pure",
        "--grid",
        "19",
        "--out",
        path2.to_str().unwrap(),
    ]);
    assert_eq!(text, fs::read_to_string(&path2).unwrap());
}

#[test]
fn audit_confirmed_relations_exit_0() {
    let out = qgeo(&["audit", "--relations", "R1,R2,R3,R4,R5", "--grid", "12"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    for id in ["R1", "R2", "R3", "R4", "R5"] {
        assert!(text.contains(&format!("{id} [")), "{text}");
    }
    assert!(text.contains("CONFIRMED"), "{text}");
    assert!(!text.contains("DEVIATION"), "{text}");
}

#[test]
fn audit_deviating_relation_exits_3_and_reports_both_forms() {
    let dir = tmpdir("audit_r6");
    let csv = dir.join("r6.csv");
    let out = qgeo(&[
        "audit",
        "--relations",
        "R6",
        "--grid",
        "20",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("DEVIATION"), "{text}");
    assert!(text.contains("corrected form"), "{text}");

    let report = fs::read_to_string(&csv).unwrap();
    let mut lines = report.lines();
    assert_eq!(
        lines.next().unwrap(),
        "relation_id,alpha,p,p1,p2,p4,r,lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status"
    );
    assert_eq!(lines.clone().count(), 20);
    assert!(lines.all(|l| l.starts_with("R6,")));
}

#[test]
fn audit_with_matching_expect_file_exits_0() {
    let dir = tmpdir("audit_expect");
    let expect = dir.join("expected_status.csv");
    fs::write(
        &expect,
        "relation_id,verdict\nR1,CONFIRMED\nR2,CONFIRMED\nR3,CONFIRMED\nR4,CONFIRMED\nR5,CONFIRMED\nR6,DEVIATION\nR7,DEVIATION\n",
    )
    .unwrap();
    let out = qgeo(&["audit", "--grid", "8", "--expect", expect.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("verdicts match expected status"));

    // A wrong expectation flips the exit code.
    fs::write(&expect, "R6,CONFIRMED\n").unwrap();
    let out = qgeo(&[
        "audit",
        "--relations",
        "R6",
        "--grid",
        "8",
        "--expect",
        expect.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("expect mismatch"), "{}", stdout(&out));
}

#[test]
fn channel_identity_round_trips_state_file() {
    let dir = tmpdir("channel_id");
    let out_path = dir.join("mapped.json");
    let out = qgeo(&[
        "channel",
        "--family",
        "mems4",
        "--p2",
        "0.2",
        "--p4",
        "0.05",
        "--channel",
        "identity",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let mapped = qgeo::states::load_state(&out_path).unwrap();
    let original = qgeo::states::mems_rank4(0.2, 0.05).unwrap();
    assert!(mapped.matrix().max_abs_diff(original.matrix()) < 1e-12);
}

#[test]
fn channel_full_depolarizing_gives_maximally_mixed_two_qubit_state() {
    let dir = tmpdir("channel_dep");
    let out_path = dir.join("mapped.json");
    let out = qgeo(&[
        "channel",
        "--family",
        "bell",
        "--channel",
        "depolarizing:1.0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let mapped = qgeo::states::load_state(&out_path).unwrap();
    let expected = qgeo::ComplexMatrix::identity(4).scale_re(0.25);
    assert!(mapped.matrix().max_abs_diff(&expected) < 1e-12);
}

#[test]
fn channel_with_generator_prints_contraction_report() {
    let dir = tmpdir("channel_mono");
    let out_path = dir.join("mapped.json");
    let out = qgeo(&[
        "channel",
        "--family",
        "pure",
        "--alpha",
        "0.6",
        "--channel",
        "dephasing:0.3",
        "--generator",
        "sx",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("holds = true"), "{text}");
}

#[test]
fn unknown_family_and_channel_exit_2() {
    let out = qgeo(&["measure", "--family", "werner", "--alpha", "0.3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qgeo(&[
        "channel",
        "--family",
        "bell",
        "--channel",
        "squeeze:0.1",
        "--out",
        "/tmp/x.json",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_family_parameters_exit_2() {
    let out = qgeo(&[
        "measure", "--family", "mems4", "--p2", "0.05", "--p4", "0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("p2 >= p4"), "{err}");
}
