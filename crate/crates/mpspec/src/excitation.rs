//! Single- and dual-tone applied-field construction on a sampling grid that
//! guarantees leakage-free spectral analysis.
//!
//! All tone frequencies must be integer multiples of a common base frequency
//! f_base ≥ 1 Hz and the sample rate an integer multiple of f_base, so every
//! analysis record spans an exact integer number of periods of every tone.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum ratio of sample rate to the fastest tone.
pub const MIN_OVERSAMPLING: f64 = 20.0;

/// Default number of records per run; the dynamics solver discards the first
/// two as transient warm-up.
pub const DEFAULT_N_RECORDS: usize = 4;

/// One sinusoidal drive tone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    /// Frequency (Hz).
    pub frequency: f64,
    /// Amplitude (A/m).
    pub amplitude: f64,
    /// Phase (rad).
    #[serde(default)]
    pub phase: f64,
}

impl Tone {
    pub fn new(frequency: f64, amplitude: f64) -> Self {
        Tone {
            frequency,
            amplitude,
            phase: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.frequency > 0.0) || !(self.amplitude >= 0.0) || !self.phase.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tone must have frequency > 0, amplitude >= 0, finite phase (got {} Hz, {} A/m)",
                self.frequency, self.amplitude
            )));
        }
        Ok(())
    }
}

/// Applied-field definition: 1–2 tones plus the sampling plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationConfig {
    pub tones: Vec<Tone>,
    /// Sample rate (Hz).
    pub sample_rate: f64,
    /// Number of base-period records to generate.
    pub n_records: usize,
}

impl ExcitationConfig {
    /// Validated constructor; enforces the tone count, oversampling, and
    /// commensurability invariants.
    pub fn new(tones: Vec<Tone>, sample_rate: f64, n_records: usize) -> Result<Self> {
        let config = ExcitationConfig {
            tones,
            sample_rate,
            n_records,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tones.is_empty() || self.tones.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "excitation needs 1 or 2 tones, got {}",
                self.tones.len()
            )));
        }
        for tone in &self.tones {
            tone.validate()?;
        }
        if self.n_records == 0 {
            return Err(Error::InvalidInput("n_records must be >= 1".into()));
        }
        let f_max = self.max_frequency();
        if self.sample_rate < MIN_OVERSAMPLING * f_max {
            return Err(Error::InvalidInput(format!(
                "sample rate {} Hz below {}x the fastest tone ({} Hz)",
                self.sample_rate, MIN_OVERSAMPLING, f_max
            )));
        }
        record_length(&self.tones, self.sample_rate)?;
        Ok(())
    }

    pub fn max_frequency(&self) -> f64 {
        self.tones.iter().fold(0.0, |acc, t| acc.max(t.frequency))
    }

    /// Common base frequency (Hz), the gcd of the tone frequencies.
    pub fn base_frequency(&self) -> Result<f64> {
        let base = integer_gcd_of_frequencies(&self.tones)?;
        Ok(base as f64)
    }

    /// Samples per base period for this config.
    pub fn base_period_samples(&self) -> Result<usize> {
        record_length(&self.tones, self.sample_rate)
    }

    /// Smallest sample rate >= `minimum` that keeps every tone on-grid and
    /// satisfies the oversampling rule. Used by preset builders to lift the
    /// default 100 kHz rate for fast tones or non-divisor frequencies.
    pub fn commensurate_rate(tones: &[Tone], minimum: f64) -> Result<f64> {
        let base = integer_gcd_of_frequencies(tones)? as f64;
        let f_max = tones.iter().fold(0.0f64, |acc, t| acc.max(t.frequency));
        let floor = minimum.max(MIN_OVERSAMPLING * f_max);
        Ok((floor / base).ceil() * base)
    }
}

/// Uniformly sampled applied field H(t).
///
/// Carries its generating tones so downstream consumers (the ODE solver) can
/// evaluate the drive exactly at off-grid times.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSeries {
    /// Field samples (A/m), length = n_records × base_period_samples.
    pub samples: Vec<f64>,
    /// Sample rate (Hz).
    pub sample_rate: f64,
    /// Samples per base period.
    pub base_period_samples: usize,
    /// Generating tones.
    pub tones: Vec<Tone>,
}

impl FieldSeries {
    pub fn n_records(&self) -> usize {
        self.samples.len() / self.base_period_samples
    }

    /// Exact analytic field at time t (s).
    pub fn field_at(&self, t: f64) -> f64 {
        field_value(&self.tones, t)
    }

    /// Sum of tone amplitudes: an upper bound for |H|.
    pub fn amplitude_bound(&self) -> f64 {
        self.tones.iter().map(|t| t.amplitude).sum()
    }

    /// Copy of the trailing `n` records.
    pub fn last_records(&self, n: usize) -> FieldSeries {
        let keep = (n * self.base_period_samples).min(self.samples.len());
        FieldSeries {
            samples: self.samples[self.samples.len() - keep..].to_vec(),
            sample_rate: self.sample_rate,
            base_period_samples: self.base_period_samples,
            tones: self.tones.clone(),
        }
    }
}

fn field_value(tones: &[Tone], t: f64) -> f64 {
    tones
        .iter()
        .map(|tone| {
            tone.amplitude * (2.0 * std::f64::consts::PI * tone.frequency * t + tone.phase).sin()
        })
        .sum()
}

/// Rounds a frequency to an integer hertz count, rejecting non-integers.
fn integer_hz(frequency: f64, what: &str) -> Result<u64> {
    let rounded = frequency.round();
    if rounded < 1.0 || (frequency - rounded).abs() > 1e-6 * frequency.max(1.0) {
        return Err(Error::IncommensurateTones {
            reason: format!("{what} {frequency} Hz is not an integer number of hertz"),
        });
    }
    Ok(rounded as u64)
}

fn integer_gcd_of_frequencies(tones: &[Tone]) -> Result<u64> {
    let mut gcd_hz = 0u64;
    for tone in tones {
        gcd_hz = gcd(gcd_hz, integer_hz(tone.frequency, "tone frequency")?);
    }
    if gcd_hz == 0 {
        return Err(Error::IncommensurateTones {
            reason: "no tones given".into(),
        });
    }
    Ok(gcd_hz)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Samples per base period: sample_rate / gcd(tone frequencies).
///
/// Errors with `IncommensurateTones` when the tones share no integer base
/// frequency ≥ 1 Hz or the sample rate is not an integer multiple of it.
pub fn record_length(tones: &[Tone], sample_rate: f64) -> Result<usize> {
    let base = integer_gcd_of_frequencies(tones)?;
    let rate = integer_hz(sample_rate, "sample rate")?;
    if rate % base != 0 {
        return Err(Error::IncommensurateTones {
            reason: format!(
                "sample rate {rate} Hz is not an integer multiple of the base frequency {base} Hz"
            ),
        });
    }
    Ok((rate / base) as usize)
}

/// Builds the sampled waveform H(tₙ) = Σᵢ Aᵢ·sin(2π·fᵢ·tₙ + φᵢ) with
/// tₙ = n / sample_rate, evaluated trigonometrically at every sample (no
/// recurrence drift).
pub fn build_waveform(config: &ExcitationConfig) -> Result<FieldSeries> {
    config.validate()?;
    let base_period_samples = config.base_period_samples()?;
    let total = base_period_samples * config.n_records;
    let dt = 1.0 / config.sample_rate;
    let samples = (0..total)
        .map(|n| field_value(&config.tones, n as f64 * dt))
        .collect();
    Ok(FieldSeries {
        samples,
        sample_rate: config.sample_rate,
        base_period_samples,
        tones: config.tones.clone(),
    })
}
