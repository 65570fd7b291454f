//! Subcommand implementations. Each command writes its artifacts into the
//! resolved output directory and prints a one-line summary to stdout.

use std::path::Path;

use serde_json::json;
use trispin_core::hamiltonian::{drift_for, NuclearConfig};
use trispin_core::linalg::CVec;
use trispin_core::placement::exchange_distribution;
use trispin_core::protocol::run_protocol;
use trispin_core::scheduler::{build_overlap_graph_broadband, estimate_parallelism, greedy_parallel_sets};
use trispin_core::spectra::{transition_table, DEFAULT_ELEMENT_THRESHOLD};
use trispin_core::{
    Axis, ExchangeModelParams, GateImpl, PulseSequence, PureState, StrainMode,
};
use num_complex::Complex64;

use crate::config::Settings;
use crate::output::{sig12, write_json, write_text};
use crate::CliError;

fn model_for(settings: &Settings, axis: Axis, mode: StrainMode) -> ExchangeModelParams {
    // a model file named in the run config wins over the axis/mode flags
    match settings.model {
        Some(m) => m,
        None => match mode {
            StrainMode::Strained => ExchangeModelParams::strained(axis),
            StrainMode::Unstrained => ExchangeModelParams::unstrained(axis),
        },
    }
}

pub fn exchange_dist(
    settings: &Settings,
    separation_nm: f64,
    axis: Axis,
    mode: StrainMode,
) -> Result<(), CliError> {
    let model = model_for(settings, axis, mode);
    let dist = exchange_distribution(separation_nm, &model)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let mut csv = String::from("class_id,rel_dx,rel_dy,multiplicity,j_mhz\n");
    for (id, entry) in dist.entries.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            id, entry.class.rel_dx, entry.class.rel_dy, entry.class.multiplicity,
            sig12(entry.j_mhz),
        ));
    }
    let path = settings.out_dir.join("exchange_dist.csv");
    write_text(&path, &csv)?;
    println!(
        "{} classes at {} nm, J spread {:.3}, wrote {}",
        dist.entries.len(),
        separation_nm,
        dist.spread(),
        path.display()
    );
    Ok(())
}

pub fn spectrum(settings: &Settings, j_tc_mhz: f64, j_cc_mhz: f64) -> Result<(), CliError> {
    let params = settings.device.clone().with_exchange(j_tc_mhz, j_cc_mhz);
    let drift = drift_for(&params, &NuclearConfig::post_swap())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let table = transition_table(&drift, DEFAULT_ELEMENT_THRESHOLD)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let zeeman = params.electron_zeeman_mhz();

    let mut csv = String::from("state_a,state_b,freq_offset_mhz,freq_lab_mhz,element,allowed\n");
    for t in &table.transitions {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            t.state_a,
            t.state_b,
            sig12(t.frequency_mhz),
            sig12(t.frequency_mhz + zeeman),
            sig12(t.element),
            t.allowed,
        ));
    }
    let path = settings.out_dir.join("spectrum.csv");
    write_text(&path, &csv)?;
    let allowed = table.transitions.iter().filter(|t| t.allowed).count();
    println!(
        "{} transitions ({} allowed) at J = ({}, {}) MHz, wrote {}",
        table.transitions.len(),
        allowed,
        j_tc_mhz,
        j_cc_mhz,
        path.display()
    );
    Ok(())
}

fn report_csv(reports: &[trispin_core::FidelityReport]) -> String {
    let mut csv = String::from("j_tc_mhz,j_cc_mhz,fidelity,iterations,converged\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            sig12(r.j_tc_mhz),
            sig12(r.j_cc_mhz),
            sig12(r.final_fidelity),
            r.iterations,
            r.converged,
        ));
    }
    csv
}

pub fn grape(settings: &Settings, j_tc_mhz: f64, j_cc_mhz: f64) -> Result<(), CliError> {
    let (pulse, report) =
        trispin_core::grape::optimize_pair(&settings.grape, &settings.device, j_tc_mhz, j_cc_mhz)
            .map_err(|e| CliError::Config(e.to_string()))?;

    let pulse_path = settings.out_dir.join("pulse.json");
    write_json(&pulse_path, &pulse)?;
    let report_path = settings.out_dir.join("report.csv");
    write_text(&report_path, &report_csv(std::slice::from_ref(&report)))?;

    // non-convergence is recorded in the report, not an error
    println!(
        "fidelity {:.6} after {} iterations (converged: {}), wrote {} and {}",
        report.final_fidelity,
        report.iterations,
        report.converged,
        pulse_path.display(),
        report_path.display()
    );
    Ok(())
}

pub fn sweep(
    settings: &Settings,
    separation_tc_nm: f64,
    separation_cc_nm: f64,
    axis: Axis,
    mode: StrainMode,
) -> Result<(), CliError> {
    let model = model_for(settings, axis, mode);
    let mut j_tc = exchange_distribution(separation_tc_nm, &model)
        .map_err(|e| CliError::Config(e.to_string()))?
        .j_values();
    let mut j_cc = exchange_distribution(separation_cc_nm, &model)
        .map_err(|e| CliError::Config(e.to_string()))?
        .j_values();
    j_tc.sort_by(|a, b| a.partial_cmp(b).unwrap());
    j_cc.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let grid = trispin_core::grape::exchange_grid(&j_tc, &j_cc);
    let reports = trispin_core::grape::sweep(&grid, &settings.grape, &settings.device)
        .map_err(|e| CliError::Config(e.to_string()))?;

    let path = settings.out_dir.join("sweep.csv");
    write_text(&path, &report_csv(&reports))?;
    let converged = reports.iter().filter(|r| r.converged).count();
    println!("{}/{} pairs converged, wrote {}", converged, reports.len(), path.display());
    Ok(())
}

pub fn schedule(
    settings: &Settings,
    spectra_path: &Path,
    tolerance_mhz: f64,
    broadband_mhz: f64,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(spectra_path).map_err(|e| {
        CliError::Config(format!("cannot read spectra file {}: {e}", spectra_path.display()))
    })?;
    let mut sets: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| {
        CliError::Config(format!("cannot parse spectra file {}: {e}", spectra_path.display()))
    })?;
    for set in &mut sets {
        set.sort_by(|a, b| a.partial_cmp(b).unwrap());
    }

    let graph = build_overlap_graph_broadband(&sets, tolerance_mhz, broadband_mhz);
    let plan = greedy_parallel_sets(&graph, settings.seed);

    let path = settings.out_dir.join("schedule.json");
    write_json(
        &path,
        &json!({
            "n_nodes": graph.n_nodes(),
            "edge_count": graph.edge_count(),
            "edge_density": graph.edge_density(),
            "tolerance_mhz": tolerance_mhz,
            "broadband_tolerance_mhz": broadband_mhz,
            "first_round_size": plan.first_round_size(),
            "rounds": plan.rounds,
        }),
    )?;
    println!(
        "{} nodes, edge density {:.3}, first round {}, wrote {}",
        graph.n_nodes(),
        graph.edge_density(),
        plan.first_round_size(),
        path.display()
    );
    Ok(())
}

pub fn estimate(settings: &Settings, n: usize, p: f64, trials: usize) -> Result<(), CliError> {
    let est = estimate_parallelism(n, p, trials, settings.seed)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let path = settings.out_dir.join("estimate.json");
    write_json(&path, &est)?;
    println!(
        "mean parallel set {:.2} +/- {:.2} over {} trials (n = {}, p = {}), wrote {}",
        est.mean,
        est.std,
        est.trials,
        n,
        p,
        path.display()
    );
    Ok(())
}

pub fn protocol_verify(
    settings: &Settings,
    pulse_path: Option<&Path>,
    j_tc_mhz: f64,
    j_cc_mhz: f64,
    micro_steps: usize,
) -> Result<(), CliError> {
    let (gate, gate_name, threshold) = match pulse_path {
        None => (GateImpl::Ideal, "ideal", 1.0 - 1e-9),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| {
                CliError::Config(format!("cannot read pulse file {}: {e}", p.display()))
            })?;
            let pulse: PulseSequence = serde_json::from_str(&text).map_err(|e| {
                CliError::Config(format!("cannot parse pulse file {}: {e}", p.display()))
            })?;
            let params = settings.device.clone().with_exchange(j_tc_mhz, j_cc_mhz);
            (
                GateImpl::Pulse { pulse, params, micro_steps_per_segment: micro_steps },
                "pulse",
                0.998,
            )
        }
    };

    let zero = PureState::basis(2, 0);
    let one = PureState::basis(2, 1);
    let nuclear = |bit: usize| if bit == 0 { zero.clone() } else { one.clone() };

    // state labels below are |control>|target>
    let mut rows = Vec::new();
    let mut trace_log = Vec::new();
    let mut all_pass = true;
    for control in 0..2usize {
        for target in 0..2usize {
            let (final_state, traces) = run_protocol(&nuclear(target), &nuclear(control), &gate)
                .map_err(|e| CliError::Config(e.to_string()))?;
            let target_out = target ^ control;
            // the returned state orders the pair as (n_T, n_C)
            let overlap = final_state.amplitudes()[(target_out << 1) | control].norm();
            let pass = overlap >= threshold;
            all_pass &= pass;
            rows.push(json!({
                "input": format!("{control}{target}"),
                "expected": format!("{control}{target_out}"),
                "overlap": overlap,
                "pass": pass,
            }));
            trace_log.push(json!({
                "input": format!("{control}{target}"),
                "steps": traces,
            }));
        }
    }

    // superposition control: |+>|0> must come out as a Bell pair
    let inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let plus = PureState::new(CVec::from_element(2, inv))
        .expect("|+> is normalized");
    let (bell_state, bell_traces) = run_protocol(&zero, &plus, &gate)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let amps = bell_state.amplitudes();
    // target (|00> + |11>)/sqrt(2) in (n_T, n_C) order
    let bell_overlap = ((amps[0] + amps[3]) * inv).norm();
    let bell_pass = bell_overlap >= threshold;
    all_pass &= bell_pass;
    trace_log.push(json!({ "input": "bell", "steps": bell_traces }));

    let path = settings.out_dir.join("protocol_verify.json");
    write_json(
        &path,
        &json!({
            "gate": gate_name,
            "pass_threshold": threshold,
            "truth_table": rows,
            "bell": { "overlap": bell_overlap, "pass": bell_pass },
            "all_pass": all_pass,
            "traces": trace_log,
        }),
    )?;
    println!(
        "{} gate: truth table + Bell {} (threshold {}), wrote {}",
        gate_name,
        if all_pass { "pass" } else { "FAIL" },
        threshold,
        path.display()
    );
    Ok(())
}
