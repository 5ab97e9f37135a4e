//! Cross-module integration: physical dual-frequency runs, paired loop
//! normalization, file round trips, and chart rendering on real sweep data.

use mpspec::analysis::reconstruct_ac_mh_paired;
use mpspec::catalog::Catalog;
use mpspec::dynamics::{simulate_magnetization, SolverOptions};
use mpspec::excitation::{build_waveform, ExcitationConfig, Tone};
use mpspec::orchestrator::{
    export_csv, import_csv, protocol_catalog, render_plots, run_sweep, sweep_csv, trend_report,
    GridPoint, SweepPlan,
};
use mpspec::physics::BindingState;
use mpspec::readout::{
    harmonic_amplitude_with, induced_voltage, spectrum, HarmonicIndex, HarmonicMode, PickupSpec,
    SidebandCombine, Window,
};
use mpspec::units::oersted_to_si;

fn fast_catalog() -> Catalog {
    Catalog::from_json(
        r#"{
        "version": "fast",
        "environment": {"temperature": 300.0, "viscosity": 1.0e-3},
        "particles": {
            "FastA": {"d_core": "25 nm", "d_hydro": "1 um", "m_sat": 60.0,
                       "density": 5180.0, "anisotropy_k": 0.0, "tau0": 1.0e-13},
            "FastB": {"d_core": "15 nm", "d_hydro": "1 um", "m_sat": 50.0,
                       "density": 5180.0, "anisotropy_k": 0.0, "tau0": 1.0e-13}
        }
    }"#,
    )
    .unwrap()
}

#[test]
fn dual_frequency_pipeline_produces_mixing_sidebands() {
    let catalog = Catalog::builtin();
    let model = catalog.particle("SHS30").unwrap();
    let config = ExcitationConfig::new(
        vec![
            Tone::new(50.0, oersted_to_si(250.0)),
            Tone::new(5_000.0, oersted_to_si(25.0)),
        ],
        100_000.0,
        4,
    )
    .unwrap();
    let field = build_waveform(&config).unwrap();
    let mag = simulate_magnetization(
        model,
        &catalog.environment,
        BindingState::Unbound,
        &field,
        &SolverOptions::default(),
    )
    .unwrap();
    let voltage = induced_voltage(&mag.last_records(1), &PickupSpec::default()).unwrap();
    let spec = spectrum(&voltage, Window::Rectangular).unwrap();

    let lower = spec.amplitude_at(4_900.0).unwrap();
    let upper = spec.amplitude_at(5_100.0).unwrap();
    let carrier = spec.amplitude_at(5_000.0).unwrap();
    assert!(lower > 0.0 && upper > 0.0);
    // The Langevin curve mixes strongly at 250 Oe: sidebands sit within an
    // order of magnitude of the carrier, and nearly symmetric.
    assert!(lower > 0.05 * carrier && upper > 0.05 * carrier);
    assert!((lower - upper).abs() / lower.max(upper) < 0.1);

    let k3 = HarmonicIndex::new(HarmonicMode::DualFrequency, 3).unwrap();
    let mean = harmonic_amplitude_with(&spec, &config, k3, SidebandCombine::Mean).unwrap();
    let sum = harmonic_amplitude_with(&spec, &config, k3, SidebandCombine::Sum).unwrap();
    assert!((mean - 0.5 * (lower + upper)).abs() < 1e-9 * mean);
    assert!((sum - (lower + upper)).abs() < 1e-9 * sum);

    // Odd mixing only: the f_H ± f_L lines vanish for an odd nonlinearity.
    let odd_line = spec.amplitude_at(4_950.0).unwrap();
    assert!(odd_line < 1e-6 * carrier);
}

#[test]
fn paired_loops_keep_relative_heights_through_the_pipeline() {
    let catalog = Catalog::builtin();
    let model = catalog.particle("SHS30").unwrap();
    let config = ExcitationConfig::new(
        vec![Tone::new(130.0, oersted_to_si(250.0))],
        100_100.0,
        4,
    )
    .unwrap();
    let field = build_waveform(&config).unwrap();
    let opts = SolverOptions::default();
    let pickup = PickupSpec::default();

    let run = |binding| {
        let mag =
            simulate_magnetization(model, &catalog.environment, binding, &field, &opts).unwrap();
        induced_voltage(&mag.last_records(1), &pickup).unwrap()
    };
    let (loop_u, loop_b) =
        reconstruct_ac_mh_paired(&field.last_records(1), &run(BindingState::Unbound), &run(BindingState::Bound))
            .unwrap();
    let peak = |l: &mpspec::analysis::MHLoop| {
        l.points.iter().fold(0.0f64, |a, &(_, m)| a.max(m.abs()))
    };
    // Only the unbound loop is pinned at 1; the bound loop keeps its true
    // relative height (here within a part in 10³ of the unbound one).
    assert!((peak(&loop_u) - 1.0).abs() < 1e-12);
    assert!(peak(&loop_b) != 1.0);
    assert!((peak(&loop_b) - 1.0).abs() < 1e-3);

    // The slower bound state encloses more area at the same drive.
    let area = |l: &mpspec::analysis::MHLoop| mpspec::analysis::loop_metrics(l).unwrap().area;
    assert!(area(&loop_b) > area(&loop_u));
}

#[test]
fn sweep_files_round_trip_and_report() {
    let catalog = fast_catalog();
    let mut plan = protocol_catalog("SF-FREQ").unwrap();
    plan.particles = vec!["FastA".into(), "FastB".into()];
    let result = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("result.csv");
    export_csv(&result, &path).unwrap();
    let on_disk = std::fs::read_to_string(&path).unwrap();
    assert_eq!(on_disk, sweep_csv(&result));

    let parsed = import_csv(&on_disk).unwrap();
    assert_eq!(parsed.rows.len(), result.rows.len());
    let report = trend_report(&parsed, &catalog);
    assert_eq!(report.delta_orderings.len(), 2);
    assert!(report.to_json().contains("delta_orderings"));
}

#[test]
fn plots_render_for_real_sweep_output() {
    let catalog = fast_catalog();
    let plan = SweepPlan {
        name: "plots".into(),
        particles: vec!["FastA".into()],
        grid: [50.0f64, 130.0, 285.0]
            .iter()
            .map(|&f| GridPoint::from_oersted_tones((f, 125.0), None, 100_000.0, 4).unwrap())
            .collect(),
        harmonics: [3, 5],
    };
    let result = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap();
    let set = render_plots(&result);
    assert_eq!(set.documents.len(), 3);
    for doc in &set.documents {
        assert!(doc.svg.contains("amplitude (V)") || doc.svg.contains("Δ (%)"));
    }
}
