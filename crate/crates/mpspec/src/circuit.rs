//! AC analysis of the resonant excitation-coil drive: impedance, current
//! response, resonant frequency, and series-capacitor sizing.
//!
//! Topology: an ideal sinusoidal source feeds the optional series resonant
//! capacitor C_R, then the coil modeled as R + jωL with its parasitic
//! capacitance C_p in parallel across the R–L branch.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Lumped coil model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoilSpec {
    /// Series resistance (Ω).
    pub resistance: f64,
    /// Inductance (H).
    pub inductance: f64,
    /// Parasitic capacitance across the R–L branch (F); 0 for the ideal model.
    pub parasitic_capacitance: f64,
}

impl CoilSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.resistance > 0.0)
            || !(self.inductance > 0.0)
            || !(self.parasitic_capacitance >= 0.0)
        {
            return Err(Error::InvalidInput(
                "coil needs resistance > 0, inductance > 0, parasitic >= 0".into(),
            ));
        }
        Ok(())
    }

    /// Low-frequency excitation coil of the bench this workbench models.
    pub fn primary() -> Self {
        CoilSpec {
            resistance: 7.923,
            inductance: 14.94e-3,
            parasitic_capacitance: 1.36e-9,
        }
    }

    /// High-frequency excitation coil of the bench this workbench models.
    pub fn secondary() -> Self {
        CoilSpec {
            resistance: 7.878,
            inductance: 694.7e-6,
            parasitic_capacitance: 1.36e-12,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "primary" => Ok(CoilSpec::primary()),
            "secondary" => Ok(CoilSpec::secondary()),
            other => Err(Error::InvalidInput(format!(
                "unknown coil {other:?} (expected \"primary\" or \"secondary\")"
            ))),
        }
    }
}

/// Source amplitude plus the optional series resonant capacitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    /// Source voltage amplitude (V).
    pub source_voltage: f64,
    /// Series resonant capacitor (F), if fitted.
    pub resonant_capacitor: Option<f64>,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.source_voltage > 0.0) {
            return Err(Error::InvalidInput("source voltage must be positive".into()));
        }
        if let Some(c) = self.resonant_capacitor {
            if !(c > 0.0) {
                return Err(Error::InvalidInput(
                    "resonant capacitor must be positive when present".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Complex drive impedance at frequency f:
/// Z = 1/(jωC_R) + (R + jωL) ∥ 1/(jωC_p), ω = 2πf.
pub fn impedance(coil: &CoilSpec, drive: &DriveSpec, frequency: f64) -> Complex64 {
    let omega = TWO_PI * frequency;
    let z_rl = Complex64::new(coil.resistance, omega * coil.inductance);
    let z_branch = if coil.parasitic_capacitance > 0.0 {
        let z_cp = Complex64::new(0.0, -1.0 / (omega * coil.parasitic_capacitance));
        z_rl * z_cp / (z_rl + z_cp)
    } else {
        z_rl
    };
    match drive.resonant_capacitor {
        Some(c_r) => z_branch + Complex64::new(0.0, -1.0 / (omega * c_r)),
        None => z_branch,
    }
}

/// Current magnitude |I| = V/|Z| at each grid frequency.
pub fn current_magnitude_sweep(
    coil: &CoilSpec,
    drive: &DriveSpec,
    f_grid: &[f64],
) -> Vec<(f64, f64)> {
    f_grid
        .iter()
        .map(|&f| (f, drive.source_voltage / impedance(coil, drive, f).norm()))
        .collect()
}

/// Resonance location: golden-section refinement and its analytic seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Resonance {
    /// Refined |I|-maximizing frequency (Hz).
    pub frequency: f64,
    /// Analytic series-resonance seed 1/(2π√(L·C_R)) (Hz).
    pub analytic_seed: f64,
    /// Peak current magnitude at the refined frequency (A).
    pub peak_current: f64,
}

/// Locates the current-resonance frequency by golden-section search seeded
/// at the analytic series-resonance estimate. Errors with `NoResonance`
/// when no series capacitor is fitted.
pub fn resonant_frequency(coil: &CoilSpec, drive: &DriveSpec) -> Result<Resonance> {
    let c_r = drive.resonant_capacitor.ok_or(Error::NoResonance)?;
    coil.validate()?;
    drive.validate()?;
    let seed = 1.0 / (TWO_PI * (coil.inductance * c_r).sqrt());

    // |Z| is unimodal around the series resonance; bracket generously.
    let (mut lo, mut hi) = (seed * 0.5, seed * 2.0);
    let value = |f: f64| impedance(coil, drive, f).norm();
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (value(a), value(b));
    while (hi - lo) > 1e-10 * seed {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = value(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = value(b);
        }
    }
    let frequency = 0.5 * (lo + hi);
    Ok(Resonance {
        frequency,
        analytic_seed: seed,
        peak_current: drive.source_voltage / value(frequency),
    })
}

/// Series capacitor that resonates the coil at `f_target`:
/// C_R = 1/((2π·f_target)²·L).
pub fn design_resonant_capacitor(coil: &CoilSpec, f_target: f64) -> Result<f64> {
    if !(f_target > 0.0) {
        return Err(Error::InvalidInput("target frequency must be positive".into()));
    }
    coil.validate()?;
    Ok(1.0 / ((TWO_PI * f_target).powi(2) * coil.inductance))
}
