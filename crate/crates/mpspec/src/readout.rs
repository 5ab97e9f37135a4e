//! Pickup-coil voltage synthesis and harmonic spectrum extraction, including
//! dual-frequency intermodulation sidebands.

use rustfft::{num_complex::Complex64, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::dynamics::MagSeries;
use crate::error::{Error, Result};
use crate::excitation::ExcitationConfig;

/// Pickup coil description. `coupling` is the sample-to-coil flux coefficient
/// (Wb per A·m²/kg of sample magnetization); it absorbs coil geometry and
/// sample mass, so absolute volt values are calibration-relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PickupSpec {
    pub turns: u32,
    /// Effective coil area (m²).
    pub effective_area: f64,
    /// Flux per unit specific magnetization (Wb/(A·m²/kg)).
    pub coupling: f64,
}

impl Default for PickupSpec {
    fn default() -> Self {
        PickupSpec {
            turns: 1,
            effective_area: 1.0,
            coupling: 1.0,
        }
    }
}

impl PickupSpec {
    pub fn validate(&self) -> Result<()> {
        if self.turns < 1 || !(self.effective_area > 0.0) || !(self.coupling > 0.0) {
            return Err(Error::InvalidInput(
                "pickup needs turns >= 1, effective_area > 0, coupling > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Induced-voltage time series (V).
#[derive(Debug, Clone, PartialEq)]
pub struct VoltageSeries {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub base_period_samples: usize,
}

impl VoltageSeries {
    /// Copy of the trailing `n` records.
    pub fn last_records(&self, n: usize) -> VoltageSeries {
        let keep = (n * self.base_period_samples).min(self.samples.len());
        VoltageSeries {
            samples: self.samples[self.samples.len() - keep..].to_vec(),
            sample_rate: self.sample_rate,
            base_period_samples: self.base_period_samples,
        }
    }
}

/// One-sided amplitude spectrum with exact-bin lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpectrum {
    /// Bin spacing (Hz) = sample_rate / record length.
    pub bin_width: f64,
    /// One-sided amplitudes per bin (same unit as the input samples).
    pub amplitudes: Vec<f64>,
    /// Phase per bin (rad).
    pub phases: Vec<f64>,
}

impl HarmonicSpectrum {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.bin_width
    }

    fn bin_of(&self, frequency_hz: f64) -> Result<usize> {
        let ratio = frequency_hz / self.bin_width;
        let bin = ratio.round();
        if (ratio - bin).abs() > 1e-9 * ratio.abs().max(1.0)
            || bin < 0.0
            || bin as usize >= self.amplitudes.len()
        {
            return Err(Error::OffBinTarget {
                frequency_hz,
                bin_width_hz: self.bin_width,
            });
        }
        Ok(bin as usize)
    }

    /// Amplitude at an exact bin frequency.
    pub fn amplitude_at(&self, frequency_hz: f64) -> Result<f64> {
        Ok(self.amplitudes[self.bin_of(frequency_hz)?])
    }

    /// Phase at an exact bin frequency (rad).
    pub fn phase_at(&self, frequency_hz: f64) -> Result<f64> {
        Ok(self.phases[self.bin_of(frequency_hz)?])
    }

    /// Writes the spectrum as CSV with header `frequency_hz,amplitude,phase_rad`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency_hz,amplitude,phase_rad\n");
        for (bin, (amp, phase)) in self.amplitudes.iter().zip(&self.phases).enumerate() {
            out.push_str(&format!("{:e},{:e},{:e}\n", self.frequency(bin), amp, phase));
        }
        out
    }
}

/// Which spectral line family a harmonic order refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HarmonicMode {
    /// Odd multiples k·f_L of the single drive tone.
    SingleFrequency,
    /// Mixing sidebands f_H ± (k−1)·f_L around the high tone.
    DualFrequency,
}

/// Harmonic selector: mode plus an odd order k ≥ 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicIndex {
    pub mode: HarmonicMode,
    pub order: u32,
}

impl HarmonicIndex {
    pub fn new(mode: HarmonicMode, order: u32) -> Result<Self> {
        if order < 3 || order % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "harmonic order must be odd and >= 3, got {order}"
            )));
        }
        Ok(HarmonicIndex { mode, order })
    }

    /// Selector matching the tone count of an excitation.
    pub fn for_excitation(config: &ExcitationConfig, order: u32) -> Result<Self> {
        let mode = if config.tones.len() == 2 {
            HarmonicMode::DualFrequency
        } else {
            HarmonicMode::SingleFrequency
        };
        HarmonicIndex::new(mode, order)
    }
}

/// How the two mixing sidebands combine into one dual-frequency amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SidebandCombine {
    #[default]
    Mean,
    Lower,
    Upper,
    Sum,
}

/// Pickup voltage ε(tₙ) = −turns·coupling·(dm/dt)(tₙ).
///
/// The derivative uses a five-point (fourth-order) central stencil with
/// periodic wrap, valid because the input is a steady-state record.
pub fn induced_voltage(mag: &MagSeries, pickup: &PickupSpec) -> Result<VoltageSeries> {
    pickup.validate()?;
    let m = &mag.samples;
    let n = m.len();
    if n < 5 {
        return Err(Error::InvalidInput(format!(
            "magnetization record too short for differentiation ({n} samples)"
        )));
    }
    let scale = -(pickup.turns as f64) * pickup.coupling * mag.sample_rate / 12.0;
    let samples = (0..n)
        .map(|i| {
            let m_p1 = m[(i + 1) % n];
            let m_p2 = m[(i + 2) % n];
            let m_m1 = m[(i + n - 1) % n];
            let m_m2 = m[(i + n - 2) % n];
            scale * (8.0 * (m_p1 - m_m1) - (m_p2 - m_m2))
        })
        .collect();
    Ok(VoltageSeries {
        samples,
        sample_rate: mag.sample_rate,
        base_period_samples: mag.base_period_samples,
    })
}

/// Spectral window. Only rectangular is supported: the integer-period record
/// guarantee makes every configured line fall exactly on a bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Window {
    #[default]
    Rectangular,
}

/// One-sided amplitude spectrum of a record spanning an integer number of
/// base periods.
///
/// Amplitudes are |X_k|·2/L for 0 < k < L/2; the DC and Nyquist bins carry
/// |X_k|/L (no doubling).
pub fn spectrum(series: &VoltageSeries, window: Window) -> Result<HarmonicSpectrum> {
    spectrum_of(
        &series.samples,
        series.sample_rate,
        series.base_period_samples,
        window,
    )
}

/// Spectrum of a raw uniformly sampled record (shared by voltage and
/// magnetization analyses).
pub fn spectrum_of(
    samples: &[f64],
    sample_rate: f64,
    base_period_samples: usize,
    window: Window,
) -> Result<HarmonicSpectrum> {
    let Window::Rectangular = window;
    let len = samples.len();
    if len == 0 || base_period_samples == 0 || len % base_period_samples != 0 {
        return Err(Error::BadRecordLength {
            len,
            base_period_samples,
        });
    }

    let mut buffer: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buffer);

    let n_bins = len / 2 + 1;
    let mut amplitudes = Vec::with_capacity(n_bins);
    let mut phases = Vec::with_capacity(n_bins);
    for (k, value) in buffer.iter().take(n_bins).enumerate() {
        let one_sided = if k == 0 || (len % 2 == 0 && k == len / 2) {
            value.norm() / len as f64
        } else {
            value.norm() * 2.0 / len as f64
        };
        amplitudes.push(one_sided);
        phases.push(value.arg());
    }
    Ok(HarmonicSpectrum {
        bin_width: sample_rate / len as f64,
        amplitudes,
        phases,
    })
}

/// Relative Parseval residual: |Σ amp²·w − mean-square| / mean-square, with
/// w = 1 for DC/Nyquist and 1/2 elsewhere. Zero-signal records return 0.
pub fn parseval_residual(samples: &[f64], spec: &HarmonicSpectrum) -> f64 {
    let len = samples.len();
    let mean_square = samples.iter().map(|x| x * x).sum::<f64>() / len as f64;
    let mut spectral = 0.0;
    for (k, amp) in spec.amplitudes.iter().enumerate() {
        let w = if k == 0 || (len % 2 == 0 && k == len / 2) {
            1.0
        } else {
            0.5
        };
        spectral += amp * amp * w;
    }
    if mean_square == 0.0 {
        spectral
    } else {
        (spectral - mean_square).abs() / mean_square
    }
}

/// Harmonic amplitude selected by mode and order, with the default mean
/// combination of dual-frequency sidebands.
pub fn harmonic_amplitude(
    spec: &HarmonicSpectrum,
    excitation: &ExcitationConfig,
    index: HarmonicIndex,
) -> Result<f64> {
    harmonic_amplitude_with(spec, excitation, index, SidebandCombine::Mean)
}

/// Harmonic amplitude with an explicit sideband combination rule.
///
/// Single-frequency mode reads the bin at k·f_L. Dual-frequency mode reads
/// the mixing sidebands at f_H ± (k−1)·f_L and combines them.
pub fn harmonic_amplitude_with(
    spec: &HarmonicSpectrum,
    excitation: &ExcitationConfig,
    index: HarmonicIndex,
    combine: SidebandCombine,
) -> Result<f64> {
    match index.mode {
        HarmonicMode::SingleFrequency => {
            let f_low = low_tone(excitation)?.frequency;
            spec.amplitude_at(index.order as f64 * f_low)
        }
        HarmonicMode::DualFrequency => {
            let f_low = low_tone(excitation)?.frequency;
            let f_high = high_tone(excitation)?.frequency;
            let offset = (index.order - 1) as f64 * f_low;
            let lower = spec.amplitude_at(f_high - offset)?;
            let upper = spec.amplitude_at(f_high + offset)?;
            Ok(match combine {
                SidebandCombine::Mean => 0.5 * (lower + upper),
                SidebandCombine::Lower => lower,
                SidebandCombine::Upper => upper,
                SidebandCombine::Sum => lower + upper,
            })
        }
    }
}

fn low_tone(config: &ExcitationConfig) -> Result<&crate::excitation::Tone> {
    config
        .tones
        .iter()
        .min_by(|a, b| a.frequency.total_cmp(&b.frequency))
        .ok_or_else(|| Error::InvalidInput("excitation has no tones".into()))
}

fn high_tone(config: &ExcitationConfig) -> Result<&crate::excitation::Tone> {
    if config.tones.len() < 2 {
        return Err(Error::InvalidInput(
            "dual-frequency harmonic requested for a single-tone excitation".into(),
        ));
    }
    config
        .tones
        .iter()
        .max_by(|a, b| a.frequency.total_cmp(&b.frequency))
        .ok_or_else(|| Error::InvalidInput("excitation has no tones".into()))
}

/// Closed-form mixing oracle: a memoryless cubic response m = H − α·H³ under
/// tones (a at f_L, b at f_H) produces sidebands of amplitude 3·α·a²·b/4 at
/// f_H ± 2·f_L.
pub fn intermod_oracle(a: f64, b: f64, alpha: f64) -> f64 {
    3.0 * alpha * a * a * b / 4.0
}
