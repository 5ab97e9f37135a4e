//! Protocol catalog, sweep execution, result tables, trend reporting, and
//! file exports.

mod plots;
mod trends;

pub use plots::{render_plots, PlotDocument, PlotSet};
pub use trends::{
    trend_report, ArgmaxEntry, Axis, DeltaOrdering, MeasuredArgmax, Monotonicity, TrendReport,
    TrendVerdict, MEASURED_ARGMAX_REFERENCE,
};

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::catalog::Catalog;
use crate::dynamics::{simulate_magnetization, SolverOptions};
use crate::error::{Error, Result};
use crate::excitation::{build_waveform, ExcitationConfig, Tone};
use crate::physics::BindingState;
use crate::readout::{
    harmonic_amplitude, induced_voltage, spectrum, HarmonicIndex, PickupSpec, Window,
};
use crate::units;

/// Default sampling rate (Hz); preset builders lift it when a grid point
/// needs a faster or commensurate grid.
pub const DEFAULT_SAMPLE_RATE: f64 = 100_000.0;

/// Low-tone frequencies of the single-frequency sweep (Hz).
pub const SF_FREQ_GRID_HZ: [f64; 5] = [50.0, 130.0, 285.0, 620.0, 1380.0];

/// High-tone frequencies of the dual-frequency sweep (Hz).
pub const DF_FREQ_GRID_HZ: [f64; 9] = [
    1_000.0, 3_000.0, 5_000.0, 8_000.0, 11_000.0, 14_000.0, 18_000.0, 22_000.0, 27_000.0,
];

/// Low-tone amplitudes of the amplitude sweeps (Oe).
pub const AMP_GRID_LOW_OE: [f64; 4] = [31.25, 62.5, 125.0, 250.0];

/// High-tone amplitudes of the dual-frequency amplitude sweep (Oe).
pub const AMP_GRID_HIGH_OE: [f64; 4] = [2.78, 8.33, 16.67, 25.0];

/// One excitation grid point with its display labels (Oe/Hz as configured).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub config: ExcitationConfig,
    pub f_l_hz: f64,
    pub a_l_oe: f64,
    pub f_h_hz: Option<f64>,
    pub a_h_oe: Option<f64>,
}

impl GridPoint {
    /// Builds a grid point from tones given in oersted, lifting the sample
    /// rate to the nearest commensurate value at or above `min_rate`.
    pub fn from_oersted_tones(
        low: (f64, f64),
        high: Option<(f64, f64)>,
        min_rate: f64,
        n_records: usize,
    ) -> Result<GridPoint> {
        let mut tones = vec![Tone::new(low.0, units::oersted_to_si(low.1))];
        if let Some((f_h, a_h)) = high {
            tones.push(Tone::new(f_h, units::oersted_to_si(a_h)));
        }
        let rate = ExcitationConfig::commensurate_rate(&tones, min_rate)?;
        Ok(GridPoint {
            config: ExcitationConfig::new(tones, rate, n_records)?,
            f_l_hz: low.0,
            a_l_oe: low.1,
            f_h_hz: high.map(|h| h.0),
            a_h_oe: high.map(|h| h.1),
        })
    }

    /// Labels a caller-supplied config (low tone = lowest frequency).
    pub fn from_config(config: ExcitationConfig) -> Result<GridPoint> {
        config.validate()?;
        let mut tones = config.tones.clone();
        tones.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
        let low = tones[0];
        let high = tones.get(1).copied();
        Ok(GridPoint {
            f_l_hz: low.frequency,
            a_l_oe: units::si_to_oersted(low.amplitude),
            f_h_hz: high.map(|t| t.frequency),
            a_h_oe: high.map(|t| units::si_to_oersted(t.amplitude)),
            config,
        })
    }
}

/// A named sweep: particle pair × binding states × excitation grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepPlan {
    pub name: String,
    pub particles: Vec<String>,
    pub grid: Vec<GridPoint>,
    /// Harmonic orders reported per row (odd, ≥ 3).
    pub harmonics: [u32; 2],
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidInput("sweep grid is empty".into()));
        }
        if self.particles.is_empty() {
            return Err(Error::InvalidInput("sweep needs at least one particle".into()));
        }
        for k in self.harmonics {
            if k < 3 || k % 2 == 0 {
                return Err(Error::InvalidInput(format!(
                    "harmonic orders must be odd and >= 3, got {k}"
                )));
            }
        }
        for point in &self.grid {
            point.config.validate()?;
        }
        Ok(())
    }
}

/// Builds one of the four preset protocols.
///
/// * `SF-FREQ` — single tone at 250 Oe, f_L ∈ {50, 130, 285, 620, 1380} Hz.
/// * `DF-FREQ` — 50 Hz at 250 Oe plus 25 Oe high tone, f_H from 1 to 27 kHz.
/// * `SF-AMP`  — single tone at 620 Hz, A_L ∈ {31.25, 62.5, 125, 250} Oe.
/// * `DF-AMP`  — 50 Hz + 5 kHz, A_L × A_H over a 4×4 grid (16 scenarios).
pub fn protocol_catalog(name: &str) -> Result<SweepPlan> {
    let particles = vec!["SHS30".to_string(), "SuperMag50".to_string()];
    let n_records = crate::excitation::DEFAULT_N_RECORDS;
    let grid = match name {
        "SF-FREQ" => SF_FREQ_GRID_HZ
            .iter()
            .map(|&f| GridPoint::from_oersted_tones((f, 250.0), None, DEFAULT_SAMPLE_RATE, n_records))
            .collect::<Result<Vec<_>>>()?,
        "DF-FREQ" => DF_FREQ_GRID_HZ
            .iter()
            .map(|&f_h| {
                GridPoint::from_oersted_tones(
                    (50.0, 250.0),
                    Some((f_h, 25.0)),
                    DEFAULT_SAMPLE_RATE,
                    n_records,
                )
            })
            .collect::<Result<Vec<_>>>()?,
        "SF-AMP" => AMP_GRID_LOW_OE
            .iter()
            .map(|&a| {
                GridPoint::from_oersted_tones((620.0, a), None, DEFAULT_SAMPLE_RATE, n_records)
            })
            .collect::<Result<Vec<_>>>()?,
        "DF-AMP" => {
            let mut grid = Vec::with_capacity(16);
            for &a_l in &AMP_GRID_LOW_OE {
                for &a_h in &AMP_GRID_HIGH_OE {
                    grid.push(GridPoint::from_oersted_tones(
                        (50.0, a_l),
                        Some((5_000.0, a_h)),
                        DEFAULT_SAMPLE_RATE,
                        n_records,
                    )?);
                }
            }
            grid
        }
        other => {
            return Err(Error::UnknownProtocol {
                name: other.to_string(),
            })
        }
    };
    Ok(SweepPlan {
        name: name.to_string(),
        particles,
        grid,
        harmonics: [3, 5],
    })
}

/// Why a row's Δ fields are empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowFlag {
    ZeroReference,
}

/// One result row: a (particle, grid point) pair with the bound and unbound
/// amplitudes of both harmonics folded in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub particle: String,
    pub grid_index: usize,
    pub f_l_hz: f64,
    pub a_l_oe: f64,
    pub f_h_hz: Option<f64>,
    pub a_h_oe: Option<f64>,
    /// Harmonic amplitudes keyed by plan harmonic: [k1, k2] × [unbound, bound].
    pub amplitudes_unbound: [f64; 2],
    pub amplitudes_bound: [f64; 2],
    pub delta_pct: [Option<f64>; 2],
    pub flag: Option<RowFlag>,
}

impl SweepRow {
    pub fn amplitude(&self, harmonic_slot: usize, binding: BindingState) -> f64 {
        match binding {
            BindingState::Unbound => self.amplitudes_unbound[harmonic_slot],
            BindingState::Bound => self.amplitudes_bound[harmonic_slot],
        }
    }
}

/// Sweep output table plus provenance metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub plan_name: String,
    pub catalog_version: String,
    pub solver: SolverOptions,
    pub harmonics: [u32; 2],
    pub rows: Vec<SweepRow>,
}

/// Runs the full pipeline for every (particle, binding, grid point): build
/// waveform → simulate → induce voltage → spectrum → harmonic amplitudes →
/// Δ per harmonic. Rows are ordered by (particle, grid index); execution is
/// deterministic so repeated runs export byte-identical tables.
pub fn run_sweep(plan: &SweepPlan, catalog: &Catalog, opts: &SolverOptions) -> Result<SweepResult> {
    plan.validate()?;
    opts.validate()?;
    let pickup = PickupSpec::default();
    let mut rows = Vec::with_capacity(plan.particles.len() * plan.grid.len());

    for particle_name in &plan.particles {
        let model = catalog.particle(particle_name)?;
        for (grid_index, point) in plan.grid.iter().enumerate() {
            let fail = |binding: BindingState, source: Error| Error::SweepFailure {
                plan: plan.name.clone(),
                grid_index,
                particle: particle_name.clone(),
                binding: binding.label().to_string(),
                source: Box::new(source),
            };

            let field = build_waveform(&point.config)
                .map_err(|e| fail(BindingState::Unbound, e))?;

            let mut amplitudes = [[0.0f64; 2]; 2]; // [state][harmonic slot]
            for (state_idx, binding) in BindingState::BOTH.iter().enumerate() {
                let mag =
                    simulate_magnetization(model, &catalog.environment, *binding, &field, opts)
                        .map_err(|e| fail(*binding, e))?;
                let steady = mag.last_records(1);
                let voltage =
                    induced_voltage(&steady, &pickup).map_err(|e| fail(*binding, e))?;
                let spec = spectrum(&voltage, Window::Rectangular)
                    .map_err(|e| fail(*binding, e))?;
                for (slot, &order) in plan.harmonics.iter().enumerate() {
                    let index = HarmonicIndex::for_excitation(&point.config, order)
                        .map_err(|e| fail(*binding, e))?;
                    amplitudes[state_idx][slot] =
                        harmonic_amplitude(&spec, &point.config, index)
                            .map_err(|e| fail(*binding, e))?;
                }
            }

            let mut delta_pct = [None, None];
            let mut flag = None;
            for slot in 0..2 {
                match analysis::percent_drop(amplitudes[0][slot], amplitudes[1][slot]) {
                    Ok(delta) => delta_pct[slot] = Some(delta),
                    Err(Error::ZeroReference) => flag = Some(RowFlag::ZeroReference),
                    Err(e) => return Err(fail(BindingState::Unbound, e)),
                }
            }

            rows.push(SweepRow {
                particle: particle_name.clone(),
                grid_index,
                f_l_hz: point.f_l_hz,
                a_l_oe: point.a_l_oe,
                f_h_hz: point.f_h_hz,
                a_h_oe: point.a_h_oe,
                amplitudes_unbound: amplitudes[0],
                amplitudes_bound: amplitudes[1],
                delta_pct,
                flag,
            });
        }
    }

    Ok(SweepResult {
        plan_name: plan.name.clone(),
        catalog_version: catalog.version.clone(),
        solver: *opts,
        harmonics: plan.harmonics,
        rows,
    })
}

/// CSV header of a sweep result table.
pub const SWEEP_CSV_HEADER: &str =
    "particle,state,f_l_hz,a_l_oe,f_h_hz,a_h_oe,a3,a5,delta3_pct,delta5_pct";

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// Renders the result as CSV.
///
/// One row per (particle, grid point): the `a3`/`a5` columns carry the
/// unbound-state amplitudes (the Δ reference), the `state` column records
/// that provenance, and the bound amplitudes are recoverable as
/// a·(1 − Δ/100). Rows with an undefined Δ leave the Δ cells empty.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{:e},{:e},{},{},{:e},{:e},{},{}\n",
            row.particle,
            BindingState::Unbound.label(),
            row.f_l_hz,
            row.a_l_oe,
            opt_num(row.f_h_hz),
            opt_num(row.a_h_oe),
            row.amplitudes_unbound[0],
            row.amplitudes_unbound[1],
            opt_num(row.delta_pct[0]),
            opt_num(row.delta_pct[1]),
        ));
    }
    out
}

/// Writes the result CSV to `destination`.
pub fn export_csv(result: &SweepResult, destination: &Path) -> Result<()> {
    let mut file = std::fs::File::create(destination).map_err(|source| Error::IoFailure {
        path: destination.display().to_string(),
        source,
    })?;
    file.write_all(sweep_csv(result).as_bytes())
        .map_err(|source| Error::IoFailure {
            path: destination.display().to_string(),
            source,
        })
}

/// Parses a sweep CSV produced by [`sweep_csv`] back into a result table
/// (bound amplitudes recovered from Δ; metadata fields are not stored in the
/// CSV and come back empty/default).
pub fn import_csv(content: &str) -> Result<SweepResult> {
    let mut lines = content.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty sweep CSV".into()))?;
    if header.trim() != SWEEP_CSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "unexpected sweep CSV header: {header:?}"
        )));
    }
    let parse_num = |s: &str, what: &str| -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| Error::InvalidInput(format!("bad {what} value {s:?} in sweep CSV")))
    };
    let parse_opt = |s: &str, what: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse_num(s, what).map(Some)
        }
    };

    let mut rows = Vec::new();
    let mut grid_index_by_particle: std::collections::BTreeMap<String, usize> = Default::default();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 10 {
            return Err(Error::InvalidInput(format!(
                "sweep CSV row has {} columns, expected 10",
                cols.len()
            )));
        }
        let particle = cols[0].to_string();
        let index = grid_index_by_particle.entry(particle.clone()).or_insert(0);
        let a_unbound = [parse_num(cols[6], "a3")?, parse_num(cols[7], "a5")?];
        let delta = [parse_opt(cols[8], "delta3")?, parse_opt(cols[9], "delta5")?];
        let bound_from = |slot: usize| match delta[slot] {
            Some(d) => a_unbound[slot] * (1.0 - d / 100.0),
            None => 0.0,
        };
        rows.push(SweepRow {
            particle,
            grid_index: *index,
            f_l_hz: parse_num(cols[2], "f_l_hz")?,
            a_l_oe: parse_num(cols[3], "a_l_oe")?,
            f_h_hz: parse_opt(cols[4], "f_h_hz")?,
            a_h_oe: parse_opt(cols[5], "a_h_oe")?,
            amplitudes_unbound: a_unbound,
            amplitudes_bound: [bound_from(0), bound_from(1)],
            delta_pct: delta,
            flag: if delta[0].is_none() || delta[1].is_none() {
                Some(RowFlag::ZeroReference)
            } else {
                None
            },
        });
        *index += 1;
    }
    Ok(SweepResult {
        plan_name: String::new(),
        catalog_version: String::new(),
        solver: SolverOptions::default(),
        harmonics: [3, 5],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use approx::assert_relative_eq;

    #[test]
    fn preset_grids_match_protocol_fixtures() {
        let sf_freq = protocol_catalog("SF-FREQ").unwrap();
        assert_eq!(sf_freq.grid.len(), 5);
        let freqs: Vec<f64> = sf_freq.grid.iter().map(|g| g.f_l_hz).collect();
        assert_eq!(freqs, vec![50.0, 130.0, 285.0, 620.0, 1380.0]);
        assert!(sf_freq.grid.iter().all(|g| g.a_l_oe == 250.0));
        assert!(sf_freq.grid.iter().all(|g| g.f_h_hz.is_none()));

        let df_freq = protocol_catalog("DF-FREQ").unwrap();
        assert_eq!(df_freq.grid.len(), 9);
        let f_h: Vec<f64> = df_freq.grid.iter().map(|g| g.f_h_hz.unwrap()).collect();
        assert_eq!(
            f_h,
            vec![1e3, 3e3, 5e3, 8e3, 11e3, 14e3, 18e3, 22e3, 27e3]
        );
        assert!(df_freq.grid.iter().all(|g| g.f_l_hz == 50.0 && g.a_l_oe == 250.0));
        assert!(df_freq.grid.iter().all(|g| g.a_h_oe == Some(25.0)));

        let sf_amp = protocol_catalog("SF-AMP").unwrap();
        assert_eq!(sf_amp.grid.len(), 4);
        let amps: Vec<f64> = sf_amp.grid.iter().map(|g| g.a_l_oe).collect();
        assert_eq!(amps, vec![31.25, 62.5, 125.0, 250.0]);
        assert!(sf_amp.grid.iter().all(|g| g.f_l_hz == 620.0));

        let df_amp = protocol_catalog("DF-AMP").unwrap();
        assert_eq!(df_amp.grid.len(), 16, "16 unique excitation scenarios");
        for g in &df_amp.grid {
            assert_eq!(g.f_l_hz, 50.0);
            assert_eq!(g.f_h_hz, Some(5_000.0));
            assert!(AMP_GRID_LOW_OE.contains(&g.a_l_oe));
            assert!(AMP_GRID_HIGH_OE.contains(&g.a_h_oe.unwrap()));
        }

        assert!(matches!(
            protocol_catalog("SF-WHAT"),
            Err(Error::UnknownProtocol { .. })
        ));
    }

    #[test]
    fn preset_rates_satisfy_oversampling_and_commensurability() {
        for name in ["SF-FREQ", "DF-FREQ", "SF-AMP", "DF-AMP"] {
            let plan = protocol_catalog(name).unwrap();
            for point in &plan.grid {
                let config = &point.config;
                assert!(config.sample_rate >= 20.0 * config.max_frequency());
                config.base_period_samples().unwrap();
            }
        }
        // 27 kHz point needs a lifted rate.
        let df = protocol_catalog("DF-FREQ").unwrap();
        assert_relative_eq!(df.grid[8].config.sample_rate, 540_000.0);
    }

    fn fast_test_catalog() -> Catalog {
        // Relaxation below 1e-9 of the base period: the solver short-circuits
        // to the equilibrium curve, keeping sweep plumbing tests fast.
        Catalog::from_json(
            r#"{
            "version": "test-fast",
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

    fn single_point_plan(amplitude_oe: f64) -> SweepPlan {
        SweepPlan {
            name: "single".into(),
            particles: vec!["FastA".into()],
            grid: vec![GridPoint::from_oersted_tones(
                (50.0, amplitude_oe),
                None,
                DEFAULT_SAMPLE_RATE,
                4,
            )
            .unwrap()],
            harmonics: [3, 5],
        }
    }

    #[test]
    fn zero_amplitude_tone_flags_zero_reference() {
        let catalog = fast_test_catalog();
        let result = run_sweep(
            &single_point_plan(0.0),
            &catalog,
            &SolverOptions::default(),
        )
        .unwrap();
        assert_eq!(result.rows.len(), 1);
        let row = &result.rows[0];
        assert_eq!(row.amplitudes_unbound, [0.0, 0.0]);
        assert_eq!(row.amplitudes_bound, [0.0, 0.0]);
        assert_eq!(row.delta_pct, [None, None]);
        assert_eq!(row.flag, Some(RowFlag::ZeroReference));
        // Empty Δ cells in the CSV.
        let csv = sweep_csv(&result);
        let row_line = csv.lines().nth(1).unwrap();
        assert!(row_line.ends_with(",,"));
    }

    #[test]
    fn identical_states_give_zero_delta() {
        // In the fast-relaxation regime both states short-circuit to the same
        // equilibrium trace, so Δ must be exactly zero.
        let catalog = fast_test_catalog();
        let result = run_sweep(
            &single_point_plan(250.0),
            &catalog,
            &SolverOptions::default(),
        )
        .unwrap();
        for row in &result.rows {
            assert_eq!(row.delta_pct, [Some(0.0), Some(0.0)]);
        }
    }

    #[test]
    fn rows_are_ordered_and_counted_by_particle_and_grid() {
        let catalog = fast_test_catalog();
        let mut plan = protocol_catalog("DF-AMP").unwrap();
        plan.particles = vec!["FastA".into(), "FastB".into()];
        let result = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap();
        // 16 grid points × 2 particles, states folded into each row.
        assert_eq!(result.rows.len(), 32);
        let csv = sweep_csv(&result);
        assert_eq!(csv.lines().count(), 33);
        for (i, row) in result.rows.iter().enumerate() {
            assert_eq!(row.particle, if i < 16 { "FastA" } else { "FastB" });
            assert_eq!(row.grid_index, i % 16);
        }
    }

    #[test]
    fn reexport_is_byte_identical() {
        let catalog = fast_test_catalog();
        let plan = single_point_plan(125.0);
        let opts = SolverOptions::default();
        let a = sweep_csv(&run_sweep(&plan, &catalog, &opts).unwrap());
        let b = sweep_csv(&run_sweep(&plan, &catalog, &opts).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn empty_result_exports_header_only() {
        let result = SweepResult {
            plan_name: "empty".into(),
            catalog_version: "test".into(),
            solver: SolverOptions::default(),
            harmonics: [3, 5],
            rows: vec![],
        };
        assert_eq!(sweep_csv(&result), format!("{SWEEP_CSV_HEADER}\n"));
    }

    #[test]
    fn csv_round_trip_recovers_rows() {
        let catalog = fast_test_catalog();
        let mut plan = protocol_catalog("SF-AMP").unwrap();
        plan.particles = vec!["FastA".into()];
        let result = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap();
        let parsed = import_csv(&sweep_csv(&result)).unwrap();
        assert_eq!(parsed.rows.len(), result.rows.len());
        for (a, b) in result.rows.iter().zip(&parsed.rows) {
            assert_eq!(a.particle, b.particle);
            assert_eq!(a.grid_index, b.grid_index);
            assert_relative_eq!(a.a_l_oe, b.a_l_oe);
            assert_relative_eq!(
                a.amplitudes_unbound[0],
                b.amplitudes_unbound[0],
                max_relative = 1e-12
            );
            match (a.delta_pct[0], b.delta_pct[0]) {
                (Some(x), Some(y)) => assert_relative_eq!(x, y, max_relative = 1e-9, epsilon = 1e-12),
                (x, y) => assert_eq!(x, y),
            }
        }
    }

    #[test]
    fn delta_fields_recompute_from_stored_amplitudes() {
        let catalog = fast_test_catalog();
        let mut plan = protocol_catalog("SF-AMP").unwrap();
        plan.particles = vec!["FastA".into(), "FastB".into()];
        let result = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap();
        assert_eq!(result.rows.len(), plan.particles.len() * plan.grid.len());
        for row in &result.rows {
            for slot in 0..2 {
                let recomputed = crate::analysis::percent_drop(
                    row.amplitudes_unbound[slot],
                    row.amplitudes_bound[slot],
                )
                .unwrap();
                assert_relative_eq!(
                    row.delta_pct[slot].unwrap(),
                    recomputed,
                    max_relative = 1e-12,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn sweep_failure_identifies_grid_point() {
        let catalog = fast_test_catalog();
        let mut plan = single_point_plan(250.0);
        plan.particles = vec!["Missing".into()];
        let err = run_sweep(&plan, &catalog, &SolverOptions::default()).unwrap_err();
        assert_eq!(err.kind(), "UnknownParticle");

        // Pipeline errors inside a grid point carry its identity.
        let catalog_slow = Catalog::from_json(
            r#"{
            "version": "t",
            "environment": {"temperature": 300.0, "viscosity": 1.0e-3},
            "particles": {
                "Slow": {"d_core": "25 nm", "d_hydro": "30 nm", "m_sat": 60.0,
                          "density": 5180.0, "anisotropy_k": 0.0, "tau0": 0.1}
            }
        }"#,
        )
        .unwrap();
        let mut plan = single_point_plan(250.0);
        plan.particles = vec!["Slow".into()];
        let err = run_sweep(&plan, &catalog_slow, &SolverOptions::default()).unwrap_err();
        match err {
            Error::SweepFailure {
                grid_index, source, ..
            } => {
                assert_eq!(grid_index, 0);
                assert_eq!(source.kind(), "NonPeriodicSteadyState");
            }
            other => panic!("expected SweepFailure, got {other:?}"),
        }
    }
}
