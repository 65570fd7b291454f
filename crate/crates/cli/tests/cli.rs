//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn trispin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trispin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn csv_rows(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(str::to_owned).collect()
}

/// A deliberately cheap optimizer configuration for plumbing tests.
fn tiny_grape_config(dir: &Path) -> std::path::PathBuf {
    let gcfg = dir.join("gcfg.json");
    std::fs::write(
        &gcfg,
        r#"{"n_segments": 4, "total_time_us": 2.0, "max_amplitude_mhz": 5.0,
            "learning_rate": 0.5, "max_iterations": 2, "fidelity_target": 0.999,
            "micro_steps_per_segment": 2, "gradient_mode": "analytic", "seed": 1}"#,
    )
    .unwrap();
    let run = dir.join("run.json");
    std::fs::write(&run, r#"{"grape_config": "gcfg.json"}"#).unwrap();
    run
}

#[test]
fn exchange_dist_writes_15_classes_with_small_strained_spread() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(&["exchange-dist", "--separation-nm", "14", "--out", "."], dir.path());
    assert_success(&out);

    let rows = csv_rows(&dir.path().join("exchange_dist.csv"));
    assert_eq!(rows[0], "class_id,rel_dx,rel_dy,multiplicity,j_mhz");
    assert_eq!(rows.len(), 16);
    let j: Vec<f64> =
        rows[1..].iter().map(|r| r.split(',').nth(4).unwrap().parse().unwrap()).collect();
    let spread = j.iter().cloned().fold(f64::MIN, f64::max)
        / j.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread <= 5.0, "strained spread {spread}");
}

#[test]
fn exchange_dist_unstrained_spread_is_large() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(
        &["exchange-dist", "--separation-nm", "14", "--mode", "unstrained", "--out", "."],
        dir.path(),
    );
    assert_success(&out);
    let rows = csv_rows(&dir.path().join("exchange_dist.csv"));
    let j: Vec<f64> =
        rows[1..].iter().map(|r| r.split(',').nth(4).unwrap().parse().unwrap()).collect();
    let spread = j.iter().cloned().fold(f64::MIN, f64::max)
        / j.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread >= 100.0, "unstrained spread {spread}");
}

#[test]
fn spectrum_writes_at_most_28_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        trispin(&["spectrum", "--j-tc-mhz", "20", "--j-cc-mhz", "5", "--out", "."], dir.path());
    assert_success(&out);

    let rows = csv_rows(&dir.path().join("spectrum.csv"));
    assert_eq!(rows[0], "state_a,state_b,freq_offset_mhz,freq_lab_mhz,element,allowed");
    assert!(rows.len() - 1 <= 28, "{} rows", rows.len() - 1);
    // lab frequency = offset + electron Zeeman at the default 1 T field
    let fields: Vec<&str> = rows[1].split(',').collect();
    let offset: f64 = fields[2].parse().unwrap();
    let lab: f64 = fields[3].parse().unwrap();
    assert!((lab - offset - 27_970.0).abs() < 1e-6);
}

#[test]
fn grape_reports_non_convergence_as_data() {
    let dir = tempfile::tempdir().unwrap();
    let run = tiny_grape_config(dir.path());
    let out = trispin(
        &[
            "grape", "--j-tc-mhz", "20", "--j-cc-mhz", "5", "--config",
            run.to_str().unwrap(), "--out", ".",
        ],
        dir.path(),
    );
    assert_success(&out);

    let rows = csv_rows(&dir.path().join("report.csv"));
    assert_eq!(rows[0], "j_tc_mhz,j_cc_mhz,fidelity,iterations,converged");
    assert!(rows[1].ends_with(",false"));
    assert!(dir.path().join("pulse.json").exists());
}

#[test]
fn grape_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = tiny_grape_config(dir.path());
    let args = [
        "grape", "--j-tc-mhz", "20", "--j-cc-mhz", "5", "--seed", "42", "--config",
        run.to_str().unwrap(),
    ];
    let mut blobs = Vec::new();
    for sub in ["a", "b"] {
        let out = trispin(&[&args[..], &["--out", sub]].concat(), dir.path());
        assert_success(&out);
        blobs.push((
            std::fs::read(dir.path().join(sub).join("pulse.json")).unwrap(),
            std::fs::read(dir.path().join(sub).join("report.csv")).unwrap(),
        ));
    }
    assert_eq!(blobs[0], blobs[1]);
}

#[test]
fn sweep_writes_225_rows_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let run = tiny_grape_config(dir.path());
    let out = trispin(
        &[
            "sweep", "--separation-tc-nm", "14", "--separation-cc-nm", "18", "--config",
            run.to_str().unwrap(), "--out", ".",
        ],
        dir.path(),
    );
    assert_success(&out);

    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 226);
    let j_tc: Vec<f64> =
        rows[1..].iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    // outer loop over J_Tc ascending, 15 rows per value
    for block in 0..15 {
        let v = j_tc[block * 15];
        assert!(j_tc[block * 15..(block + 1) * 15].iter().all(|&x| x == v));
        if block > 0 {
            assert!(v > j_tc[(block - 1) * 15]);
        }
    }
}

#[test]
fn schedule_partitions_the_conflict_graph() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("spectra.json"), "[[10.0, 20.0], [10.4, 35.0], [50.0, 60.0]]")
        .unwrap();
    let out = trispin(
        &["schedule", "--spectra", "spectra.json", "--tolerance-mhz", "1.0", "--out", "."],
        dir.path(),
    );
    assert_success(&out);

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("schedule.json")).unwrap())
            .unwrap();
    assert_eq!(report["n_nodes"], 3);
    assert_eq!(report["edge_count"], 1); // only the 10.0/10.4 collision
    let rounds = report["rounds"].as_array().unwrap();
    let total: usize = rounds.iter().map(|r| r.as_array().unwrap().len()).sum();
    assert_eq!(total, 3);
}

#[test]
fn estimate_matches_library_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(
        &["estimate", "--n", "50", "--p", "0.3", "--trials", "100", "--seed", "9", "--out", "."],
        dir.path(),
    );
    assert_success(&out);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("estimate.json")).unwrap())
            .unwrap();
    assert_eq!(report["n"], 50);
    assert_eq!(report["trials"], 100);
    assert!(report["mean"].as_f64().unwrap() > 0.0);
}

#[test]
fn protocol_verify_ideal_passes_the_truth_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(&["protocol-verify", "--out", "."], dir.path());
    assert_success(&out);

    let report: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("protocol_verify.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["all_pass"], true);
    let table = report["truth_table"].as_array().unwrap();
    assert_eq!(table.len(), 4);
    let flip = table.iter().find(|r| r["input"] == "11").unwrap();
    assert_eq!(flip["expected"], "10");
    assert!(flip["overlap"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(report["bell"]["pass"], true);
    // six labelled steps per trace
    let steps = report["traces"][0]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 6);
}

#[test]
fn converged_pulse_passes_protocol_verification() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(
        &["grape", "--j-tc-mhz", "20", "--j-cc-mhz", "5", "--seed", "1", "--out", "."],
        dir.path(),
    );
    assert_success(&out);
    let report = csv_rows(&dir.path().join("report.csv"));
    assert!(report[1].ends_with(",true"), "optimization should converge: {}", report[1]);

    let out = trispin(
        &[
            "protocol-verify", "--pulse", "pulse.json", "--j-tc-mhz", "20", "--j-cc-mhz", "5",
            "--out", ".",
        ],
        dir.path(),
    );
    assert_success(&out);
    let verify: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("protocol_verify.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(verify["all_pass"], true);
    for row in verify["truth_table"].as_array().unwrap() {
        assert!(row["overlap"].as_f64().unwrap() >= 0.998);
    }
}

#[test]
fn invalid_parameters_exit_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(&["estimate", "--n", "10", "--p", "1.5", "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = trispin(&["schedule", "--spectra", "missing.json", "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(2));

    let out = trispin(
        &["grape", "--j-tc-mhz", "20", "--j-cc-mhz", "5", "--config", "missing.json", "--out", "."],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = trispin(
        &["exchange-dist", "--separation-nm", "14", "--out", "/proc/nonexistent"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}
