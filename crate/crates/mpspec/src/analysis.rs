//! Comparison metrics: Δ percent drop, AC M-H loop reconstruction with loop
//! metrics, and per-mole normalization.

use serde::{Deserialize, Serialize};

use crate::dynamics::MagSeries;
use crate::error::{Error, Result};
use crate::excitation::FieldSeries;
use crate::readout::VoltageSeries;
use crate::units;

/// Percent drop of one harmonic from the unbound to the bound state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaResult {
    pub harmonic_order: u32,
    pub amplitude_unbound: f64,
    pub amplitude_bound: f64,
    pub delta_percent: f64,
}

/// Δ = (A_unbound − A_bound)/A_unbound × 100.
///
/// Positive when binding suppresses the harmonic; at most 100 for
/// non-negative amplitudes. Errors with `ZeroReference` when the unbound
/// amplitude is zero.
pub fn percent_drop(amplitude_unbound: f64, amplitude_bound: f64) -> Result<f64> {
    if amplitude_unbound == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((amplitude_unbound - amplitude_bound) / amplitude_unbound * 100.0)
}

/// Percent drop packaged with its inputs.
pub fn delta_result(order: u32, amplitude_unbound: f64, amplitude_bound: f64) -> Result<DeltaResult> {
    Ok(DeltaResult {
        harmonic_order: order,
        amplitude_unbound,
        amplitude_bound,
        delta_percent: percent_drop(amplitude_unbound, amplitude_bound)?,
    })
}

/// Normalized dynamic magnetization-field trajectory over one base period.
///
/// Points are time-ordered and cyclic (the sample after the last is the
/// first); m is normalized so max |m| = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MHLoop {
    /// (H in A/m, normalized m) pairs.
    pub points: Vec<(f64, f64)>,
}

impl MHLoop {
    /// CSV export with header `h_oe,m_normalized` (field in oersted).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("h_oe,m_normalized\n");
        for &(h, m) in &self.points {
            out.push_str(&format!("{:e},{:e}\n", units::si_to_oersted(h), m));
        }
        out
    }

    /// Largest |H| over the loop (A/m).
    pub fn max_abs_field(&self) -> f64 {
        self.points.iter().fold(0.0f64, |a, &(h, _)| a.max(h.abs()))
    }
}

/// Hysteresis descriptors of one loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopMetrics {
    /// Field at the magnetization zero crossings (A/m).
    pub coercive_field: f64,
    /// Normalized magnetization at the field zero crossings.
    pub remanence: f64,
    /// |∮ m dH| (A/m, since m is normalized).
    pub area: f64,
}

impl LoopMetrics {
    /// JSON object with named fields, coercive field in both unit systems.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "coercive_field_a_per_m": self.coercive_field,
            "coercive_field_oe": units::si_to_oersted(self.coercive_field),
            "remanence_normalized": self.remanence,
            "area_a_per_m": self.area,
        })
        .to_string()
    }
}

fn check_alignment(field: &FieldSeries, voltage: &VoltageSeries) -> Result<()> {
    if field.sample_rate != voltage.sample_rate {
        return Err(Error::PeriodMismatch {
            reason: format!(
                "sample rates differ: field {} Hz vs voltage {} Hz",
                field.sample_rate, voltage.sample_rate
            ),
        });
    }
    if field.base_period_samples != voltage.base_period_samples {
        return Err(Error::PeriodMismatch {
            reason: format!(
                "base periods differ: field {} vs voltage {} samples",
                field.base_period_samples, voltage.base_period_samples
            ),
        });
    }
    if field.samples.len() != voltage.samples.len() {
        return Err(Error::PeriodMismatch {
            reason: format!(
                "series lengths differ: field {} vs voltage {} samples",
                field.samples.len(),
                voltage.samples.len()
            ),
        });
    }
    if field.samples.len() < field.base_period_samples {
        return Err(Error::PeriodMismatch {
            reason: "series shorter than one base period".into(),
        });
    }
    Ok(())
}

/// Integrates the raw magnetization trace back out of the pickup voltage:
/// cumulative trapezoid of −ε, mean-subtracted over the period.
fn integrate_voltage_period(voltage: &[f64], dt: f64) -> Vec<f64> {
    let mut m = Vec::with_capacity(voltage.len());
    let mut acc = 0.0;
    m.push(0.0);
    for i in 1..voltage.len() {
        acc += -(voltage[i - 1] + voltage[i]) * 0.5 * dt;
        m.push(acc);
    }
    let mean = m.iter().sum::<f64>() / m.len() as f64;
    m.iter_mut().for_each(|x| *x -= mean);
    m
}

/// Reconstructs the AC M-H loop from the applied field and the pickup
/// voltage: m̃ = ∫(−ε)dt over the final base period, mean-subtracted and
/// normalized to max |m̃| = 1, paired with H.
pub fn reconstruct_ac_mh(field: &FieldSeries, voltage: &VoltageSeries) -> Result<MHLoop> {
    check_alignment(field, voltage)?;
    let base = field.base_period_samples;
    let h_period = &field.samples[field.samples.len() - base..];
    let v_period = &voltage.samples[voltage.samples.len() - base..];

    let mut m = integrate_voltage_period(v_period, 1.0 / field.sample_rate);
    let peak = m.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if peak == 0.0 {
        return Err(Error::DegenerateLoop);
    }
    m.iter_mut().for_each(|x| *x /= peak);
    Ok(MHLoop {
        points: h_period.iter().copied().zip(m).collect(),
    })
}

/// Bound/unbound loop pair reconstructed with a shared normalization: both
/// magnetization traces are scaled by the unbound maximum, preserving the
/// relative loop heights.
pub fn reconstruct_ac_mh_paired(
    field: &FieldSeries,
    voltage_unbound: &VoltageSeries,
    voltage_bound: &VoltageSeries,
) -> Result<(MHLoop, MHLoop)> {
    check_alignment(field, voltage_unbound)?;
    check_alignment(field, voltage_bound)?;
    let base = field.base_period_samples;
    let h_period = &field.samples[field.samples.len() - base..];
    let dt = 1.0 / field.sample_rate;

    let m_unbound =
        integrate_voltage_period(&voltage_unbound.samples[voltage_unbound.samples.len() - base..], dt);
    let m_bound =
        integrate_voltage_period(&voltage_bound.samples[voltage_bound.samples.len() - base..], dt);
    let peak = m_unbound.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if peak == 0.0 {
        return Err(Error::DegenerateLoop);
    }
    let build = |m: Vec<f64>| MHLoop {
        points: h_period
            .iter()
            .copied()
            .zip(m.into_iter().map(|x| x / peak))
            .collect(),
    };
    Ok((build(m_unbound), build(m_bound)))
}

/// First two cyclic zero crossings of `select`, linearly interpolated, each
/// reported as the companion coordinate `other` at the crossing.
fn crossings_of(
    points: &[(f64, f64)],
    select: impl Fn(&(f64, f64)) -> f64,
    other: impl Fn(&(f64, f64)) -> f64,
) -> Vec<f64> {
    let n = points.len();
    let mut out = Vec::new();
    for i in 0..n {
        let a = &points[i];
        let b = &points[(i + 1) % n];
        let (sa, sb) = (select(a), select(b));
        if sa == 0.0 {
            out.push(other(a));
        } else if (sa < 0.0) != (sb < 0.0) && sb != 0.0 {
            let t = sa / (sa - sb);
            out.push(other(a) + t * (other(b) - other(a)));
        }
        if out.len() == 2 {
            break;
        }
    }
    out
}

/// Coercive field, remanence, and enclosed area of a loop.
///
/// Coercive field: mean |H| at the two magnetization zero crossings.
/// Remanence: mean |m| at the two field zero crossings. Area: |∮ m dH| by
/// the cyclic trapezoid (shoelace) rule.
pub fn loop_metrics(mh_loop: &MHLoop) -> Result<LoopMetrics> {
    let points = &mh_loop.points;
    if points.len() < 4 {
        return Err(Error::InvalidInput("loop needs at least 4 points".into()));
    }
    let m_crossings = crossings_of(points, |p| p.1, |p| p.0);
    if m_crossings.is_empty() {
        return Err(Error::NoZeroCrossing);
    }
    let coercive_field =
        m_crossings.iter().map(|h| h.abs()).sum::<f64>() / m_crossings.len() as f64;

    let h_crossings = crossings_of(points, |p| p.0, |p| p.1);
    let remanence = if h_crossings.is_empty() {
        0.0
    } else {
        h_crossings.iter().map(|m| m.abs()).sum::<f64>() / h_crossings.len() as f64
    };

    let mut area = 0.0;
    for i in 0..points.len() {
        let (h0, m0) = points[i];
        let (h1, m1) = points[(i + 1) % points.len()];
        area += 0.5 * (m0 + m1) * (h1 - h0);
    }

    Ok(LoopMetrics {
        coercive_field,
        remanence,
        area: area.abs(),
    })
}

/// Harmonic amplitude per micromole of sample.
pub fn per_mole_amplitude(amplitude: f64, molar_amount: f64) -> Result<f64> {
    if molar_amount == 0.0 {
        return Err(Error::ZeroMoles);
    }
    Ok(amplitude / (molar_amount * 1e6))
}

/// RMS difference between a reconstructed loop's magnetization and a solver
/// record normalized the same way (mean-subtracted, peak-scaled).
pub fn loop_rms_error(mh_loop: &MHLoop, mag: &MagSeries) -> f64 {
    let base = mag.base_period_samples;
    let m_solver = &mag.samples[mag.samples.len() - base..];
    let mean = m_solver.iter().sum::<f64>() / base as f64;
    let centered: Vec<f64> = m_solver.iter().map(|m| m - mean).collect();
    let peak = centered.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let diff_sq: f64 = mh_loop
        .points
        .iter()
        .zip(&centered)
        .map(|(&(_, m_rec), &m_ref)| {
            let d = m_rec - m_ref / peak;
            d * d
        })
        .sum();
    (diff_sq / base as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::excitation::Tone;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    fn synthetic_pair(
        freq: f64,
        rate: f64,
        periods: usize,
        phase_lag: f64,
    ) -> (FieldSeries, VoltageSeries) {
        // H = sin(ωt), m = sin(ωt − φ), ε = −dm/dt.
        let base = (rate / freq) as usize;
        let n = base * periods;
        let omega = TWO_PI * freq;
        let field = FieldSeries {
            samples: (0..n).map(|i| (omega * i as f64 / rate).sin()).collect(),
            sample_rate: rate,
            base_period_samples: base,
            tones: vec![Tone::new(freq, 1.0)],
        };
        let voltage = VoltageSeries {
            samples: (0..n)
                .map(|i| -omega * (omega * i as f64 / rate - phase_lag).cos())
                .collect(),
            sample_rate: rate,
            base_period_samples: base,
        };
        (field, voltage)
    }

    #[test]
    fn percent_drop_reference_points() {
        assert_eq!(percent_drop(100.0, 100.0).unwrap(), 0.0);
        assert_eq!(percent_drop(100.0, 0.0).unwrap(), 100.0);
        assert_eq!(percent_drop(200.0, 150.0).unwrap(), 25.0);
        assert!(matches!(percent_drop(0.0, 5.0), Err(Error::ZeroReference)));

        let packaged = delta_result(3, 200.0, 150.0).unwrap();
        assert_eq!(packaged.harmonic_order, 3);
        assert_eq!(packaged.delta_percent, 25.0);
        assert_eq!(packaged.amplitude_unbound, 200.0);
        assert_eq!(packaged.amplitude_bound, 150.0);
    }

    proptest! {
        #[test]
        fn percent_drop_is_scale_invariant(
            unbound in 1e-12f64..1e6,
            bound in 0.0f64..1e6,
            scale in 1e-6f64..1e6,
        ) {
            let base = percent_drop(unbound, bound).unwrap();
            let scaled = percent_drop(unbound * scale, bound * scale).unwrap();
            prop_assert!((base - scaled).abs() < 1e-9 * base.abs().max(1.0));
            prop_assert!(base <= 100.0);
        }
    }

    #[test]
    fn reconstruction_inverts_differentiation() {
        let (field, voltage) = synthetic_pair(100.0, 100_000.0, 1, 0.0);
        let mh_loop = reconstruct_ac_mh(&field, &voltage).unwrap();
        // Reconstructed m should correlate with sin (the field) essentially 1.
        let (mut sum_xy, mut sum_xx, mut sum_yy) = (0.0, 0.0, 0.0);
        for (&(h, m), _) in mh_loop.points.iter().zip(0..) {
            sum_xy += h * m;
            sum_xx += h * h;
            sum_yy += m * m;
        }
        let corr = sum_xy / (sum_xx * sum_yy).sqrt();
        assert!(corr > 0.99999, "correlation {corr}");
        let peak = mh_loop.points.iter().fold(0.0f64, |a, &(_, m)| a.max(m.abs()));
        assert_abs_diff_eq!(peak, 1.0, epsilon = 1e-12);

        // The loop closes: the wrap step from last back to first is no
        // larger than the interior sample-to-sample steps.
        let max_interior_gap = mh_loop
            .points
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs())
            .fold(0.0f64, f64::max);
        let wrap_gap = (mh_loop.points[0].1 - mh_loop.points.last().unwrap().1).abs();
        assert!(wrap_gap <= 1.5 * max_interior_gap + 1e-12);
    }

    #[test]
    fn zero_voltage_is_degenerate() {
        let (field, mut voltage) = synthetic_pair(100.0, 100_000.0, 1, 0.0);
        voltage.samples.iter_mut().for_each(|v| *v = 0.0);
        assert!(matches!(
            reconstruct_ac_mh(&field, &voltage),
            Err(Error::DegenerateLoop)
        ));
    }

    #[test]
    fn mismatched_series_are_rejected() {
        let (field, voltage) = synthetic_pair(100.0, 100_000.0, 2, 0.0);
        let short = voltage.last_records(1);
        assert!(matches!(
            reconstruct_ac_mh(&field, &short),
            Err(Error::PeriodMismatch { .. })
        ));
    }

    #[test]
    fn reconstruction_is_invariant_under_voltage_scaling_and_shift() {
        let (field, voltage) = synthetic_pair(100.0, 100_000.0, 1, 0.7);
        let reference = reconstruct_ac_mh(&field, &voltage).unwrap();
        let ref_metrics = loop_metrics(&reference).unwrap();

        let mut scaled = voltage.clone();
        scaled.samples.iter_mut().for_each(|v| *v *= 37.5);
        let scaled_loop = reconstruct_ac_mh(&field, &scaled).unwrap();
        for ((_, m0), (_, m1)) in reference.points.iter().zip(&scaled_loop.points) {
            assert_abs_diff_eq!(m0, m1, epsilon = 1e-12);
        }

        // Rotating both series by whole samples leaves the metrics unchanged.
        for shift in [1usize, 17, 499] {
            let rotate = |s: &[f64]| {
                let mut v = s.to_vec();
                v.rotate_left(shift % s.len());
                v
            };
            let field_rot = FieldSeries {
                samples: rotate(&field.samples),
                ..field.clone()
            };
            let voltage_rot = VoltageSeries {
                samples: rotate(&voltage.samples),
                sample_rate: voltage.sample_rate,
                base_period_samples: voltage.base_period_samples,
            };
            let rotated = reconstruct_ac_mh(&field_rot, &voltage_rot).unwrap();
            let rot_metrics = loop_metrics(&rotated).unwrap();
            assert_abs_diff_eq!(
                rot_metrics.coercive_field,
                ref_metrics.coercive_field,
                epsilon = 1e-6
            );
            assert_abs_diff_eq!(rot_metrics.area, ref_metrics.area, epsilon = 1e-6);
            assert_abs_diff_eq!(rot_metrics.remanence, ref_metrics.remanence, epsilon = 1e-6);
        }
    }

    #[test]
    fn lagged_loop_matches_ellipse_geometry() {
        // At phase lag π/4 the normalized loop is an ellipse with area
        // π·H₀·sin(φ); coercivity H₀·sin(φ), remanence sin(φ).
        let phi = std::f64::consts::FRAC_PI_4;
        let (field, voltage) = synthetic_pair(100.0, 100_000.0, 1, phi);
        let mh_loop = reconstruct_ac_mh(&field, &voltage).unwrap();
        let metrics = loop_metrics(&mh_loop).unwrap();
        assert_relative_eq!(
            metrics.area,
            std::f64::consts::PI * phi.sin(),
            max_relative = 1e-2
        );
        assert_relative_eq!(metrics.coercive_field, phi.sin(), max_relative = 1e-3);
        assert_relative_eq!(metrics.remanence, phi.sin(), max_relative = 1e-3);
    }

    #[test]
    fn lag_free_loop_has_no_hysteresis() {
        let (field, voltage) = synthetic_pair(100.0, 100_000.0, 1, 0.0);
        let mh_loop = reconstruct_ac_mh(&field, &voltage).unwrap();
        let metrics = loop_metrics(&mh_loop).unwrap();
        let full_scale = mh_loop.max_abs_field();
        assert!(metrics.coercive_field < 1e-3 * full_scale);
        assert!(metrics.area < 1e-3 * full_scale);
    }

    #[test]
    fn loop_area_grows_from_zero_with_lag() {
        let mut last_area = -1.0;
        for phi in [0.0, 0.2, 0.5, 1.0] {
            let (field, voltage) = synthetic_pair(100.0, 100_000.0, 1, phi);
            let metrics = loop_metrics(&reconstruct_ac_mh(&field, &voltage).unwrap()).unwrap();
            assert!(metrics.area >= 0.0);
            assert!(metrics.area > last_area);
            if phi == 0.0 {
                assert!(metrics.area < 1e-3);
            }
            last_area = metrics.area;
        }
    }

    #[test]
    fn flat_magnetization_has_no_crossing() {
        let points: Vec<(f64, f64)> = (0..100)
            .map(|i| ((TWO_PI * i as f64 / 100.0).sin(), 1.0))
            .collect();
        assert!(matches!(
            loop_metrics(&MHLoop { points }),
            Err(Error::NoZeroCrossing)
        ));
    }

    #[test]
    fn per_mole_uses_micromole_scale() {
        // Vial presets: 544 fmol and 40 fmol.
        assert_relative_eq!(
            per_mole_amplitude(1.0, 5.44e-13).unwrap(),
            1.0 / 5.44e-7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            per_mole_amplitude(1.0, 4.0e-14).unwrap(),
            1.0 / 4.0e-8,
            max_relative = 1e-12
        );
        assert_eq!(per_mole_amplitude(0.0, 1e-13).unwrap(), 0.0);
        assert!(matches!(per_mole_amplitude(1.0, 0.0), Err(Error::ZeroMoles)));
    }

    #[test]
    fn paired_loops_share_the_unbound_normalization() {
        let (field, voltage_u) = synthetic_pair(100.0, 100_000.0, 1, 0.3);
        let mut voltage_b = voltage_u.clone();
        voltage_b.samples.iter_mut().for_each(|v| *v *= 0.6);
        let (loop_u, loop_b) = reconstruct_ac_mh_paired(&field, &voltage_u, &voltage_b).unwrap();
        let peak_u = loop_u.points.iter().fold(0.0f64, |a, &(_, m)| a.max(m.abs()));
        let peak_b = loop_b.points.iter().fold(0.0f64, |a, &(_, m)| a.max(m.abs()));
        assert_abs_diff_eq!(peak_u, 1.0, epsilon = 1e-12);
        assert_relative_eq!(peak_b, 0.6, max_relative = 1e-9);
    }
}
