//! Relaxation-equation integrator producing steady-state magnetization
//! records for a sample under a given excitation.
//!
//! The governing equation is dm/dt = (m_eq(H(t)) − m)/τ(H(t)) with a
//! classical fixed-step fourth-order Runge–Kutta scheme. τ is the
//! binding-state effective relaxation time; by default it carries the
//! equilibrium-slope field correction τ(H) = τ_eff·ξL'(ξ)/L(ξ), which
//! shortens the response as the instantaneous field saturates the moment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::excitation::FieldSeries;
use crate::physics::{
    self, BindingState, Environment, ParticleModel,
};

/// How the relaxation time responds to the instantaneous field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauFieldCorrection {
    /// τ fixed at its zero-field value for the whole run.
    Fixed,
    /// τ scaled by d ln L/d ln ξ at the instantaneous field (default).
    #[default]
    EquilibriumSlope,
}

/// Integrator options.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Substeps per fastest timescale; the internal step is
    /// min(1/(step_divisor·f_max), τ_min/step_divisor).
    pub step_divisor: u32,
    /// Leading records discarded as transient warm-up.
    pub warmup_records: usize,
    /// Relative RMS tolerance between the last two retained records.
    pub periodicity_tol: f64,
    /// Field dependence of the relaxation time.
    #[serde(default)]
    pub tau_field_correction: TauFieldCorrection,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            step_divisor: 20,
            warmup_records: 2,
            periodicity_tol: 1e-4,
            tau_field_correction: TauFieldCorrection::default(),
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.step_divisor < 10 {
            return Err(Error::InvalidInput(format!(
                "step_divisor must be >= 10, got {}",
                self.step_divisor
            )));
        }
        if self.warmup_records < 1 {
            return Err(Error::InvalidInput("warmup_records must be >= 1".into()));
        }
        if !(self.periodicity_tol > 0.0) {
            return Err(Error::InvalidInput("periodicity_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Steady-state specific magnetization record (A·m²/kg).
#[derive(Debug, Clone, PartialEq)]
pub struct MagSeries {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub base_period_samples: usize,
}

impl MagSeries {
    pub fn n_records(&self) -> usize {
        self.samples.len() / self.base_period_samples
    }

    /// Copy of the trailing `n` records.
    pub fn last_records(&self, n: usize) -> MagSeries {
        let keep = (n * self.base_period_samples).min(self.samples.len());
        MagSeries {
            samples: self.samples[self.samples.len() - keep..].to_vec(),
            sample_rate: self.sample_rate,
            base_period_samples: self.base_period_samples,
        }
    }
}

/// Relative RMS difference between the final two records; 0 for an exactly
/// periodic output.
pub fn steady_state_residual(mag: &MagSeries) -> f64 {
    let base = mag.base_period_samples;
    let n = mag.samples.len();
    assert!(n >= 2 * base, "need at least two retained records");
    let last = &mag.samples[n - base..];
    let prev = &mag.samples[n - 2 * base..n - base];
    let diff_sq: f64 = last
        .iter()
        .zip(prev)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let ref_sq: f64 = last.iter().map(|x| x * x).sum();
    if ref_sq == 0.0 {
        if diff_sq == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (diff_sq / ref_sq).sqrt()
    }
}

/// Analytic first-order (Debye) response: a linear system m_eq = χ₀·H with
/// relaxation time τ has fundamental gain χ₀/√(1+(ωτ)²) and phase lag
/// atan(ωτ).
pub fn debye_linear_response(chi0: f64, tau: f64, omega: f64) -> (f64, f64) {
    let wt = omega * tau;
    (chi0 / (1.0 + wt * wt).sqrt(), wt.atan())
}

/// Integrates dm/dt = (eq(H) − m)/tau(H) over the field record and returns
/// the steady-state samples with warm-up discarded.
///
/// `eq` maps field (A/m) to equilibrium magnetization; `tau` maps field to a
/// relaxation time in seconds (may be `INFINITY` for a frozen response).
/// The initial condition is m(0) = eq(H(0)).
pub fn simulate_response(
    eq: impl Fn(f64) -> f64,
    tau: impl Fn(f64) -> f64,
    field: &FieldSeries,
    opts: &SolverOptions,
) -> Result<MagSeries> {
    opts.validate()?;
    let base = field.base_period_samples;
    let n_records = field.n_records();
    if field.samples.is_empty() || base == 0 || field.samples.len() % base != 0 {
        return Err(Error::InvalidInput(
            "field series length must be a positive multiple of the base period".into(),
        ));
    }
    if n_records < opts.warmup_records + 2 {
        return Err(Error::InvalidInput(format!(
            "need at least warmup_records + 2 = {} records, field has {}",
            opts.warmup_records + 2,
            n_records
        )));
    }

    let dt = 1.0 / field.sample_rate;
    let period = base as f64 * dt;

    // Fastest relaxation over the drive swing, scanned over one period.
    let mut tau_min = f64::INFINITY;
    let mut tau_max: f64 = 0.0;
    for &h in &field.samples[..base] {
        let t = tau(h);
        if !(t > 0.0) {
            return Err(Error::InvalidInput(format!(
                "relaxation time must be positive, got {t} at H = {h}"
            )));
        }
        tau_min = tau_min.min(t);
        tau_max = tau_max.max(t);
    }

    let retained_len = (n_records - opts.warmup_records) * base;

    // Frozen response: infinite τ holds the initial condition forever.
    if tau_min.is_infinite() {
        let m0 = eq(field.samples[0]);
        return Ok(MagSeries {
            samples: vec![m0; retained_len],
            sample_rate: field.sample_rate,
            base_period_samples: base,
        });
    }

    // Instantaneous-equilibrium limit: relaxation far below any resolvable
    // timescale tracks m_eq pointwise.
    if tau_max < 1e-9 * period {
        let samples = field.samples[field.samples.len() - retained_len..]
            .iter()
            .map(|&h| eq(h))
            .collect();
        return Ok(MagSeries {
            samples,
            sample_rate: field.sample_rate,
            base_period_samples: base,
        });
    }

    let f_max = field
        .tones
        .iter()
        .fold(0.0f64, |acc, t| acc.max(t.frequency));
    let divisor = opts.step_divisor as f64;
    let ideal_h = (1.0 / (divisor * f_max)).min(tau_min / divisor);
    let n_sub = ((dt / ideal_h).ceil() as usize).max(1);
    let h_step = dt / n_sub as f64;

    let deriv = |t: f64, m: f64| {
        let field_now = field.field_at(t);
        (eq(field_now) - m) / tau(field_now)
    };

    let mut samples = Vec::with_capacity(field.samples.len());
    let mut m = eq(field.samples[0]);
    samples.push(m);
    for n in 0..field.samples.len() - 1 {
        let t_sample = n as f64 * dt;
        for j in 0..n_sub {
            let t = t_sample + j as f64 * h_step;
            let k1 = deriv(t, m);
            let k2 = deriv(t + 0.5 * h_step, m + 0.5 * h_step * k1);
            let k3 = deriv(t + 0.5 * h_step, m + 0.5 * h_step * k2);
            let k4 = deriv(t + h_step, m + h_step * k3);
            m += h_step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        samples.push(m);
    }

    let retained = MagSeries {
        samples: samples[samples.len() - retained_len..].to_vec(),
        sample_rate: field.sample_rate,
        base_period_samples: base,
    };
    let residual = steady_state_residual(&retained);
    if residual > opts.periodicity_tol {
        return Err(Error::NonPeriodicSteadyState {
            residual,
            tolerance: opts.periodicity_tol,
        });
    }
    Ok(retained)
}

/// Simulates the magnetization of a physical sample under the given field.
///
/// Equilibrium follows the Langevin curve of the particle; the relaxation
/// time is the binding-state effective time, optionally field-corrected.
pub fn simulate_magnetization(
    model: &ParticleModel,
    env: &Environment,
    binding: BindingState,
    field: &FieldSeries,
    opts: &SolverOptions,
) -> Result<MagSeries> {
    model.validate()?;
    env.validate()?;
    let tau_eff = physics::effective_time_for(model, env, binding);
    let xi_per_field = physics::MU_0 * model.particle_moment() / env.thermal_energy();
    let m_sat = model.m_sat;

    let eq = move |h: f64| m_sat * physics::langevin(xi_per_field * h);
    match opts.tau_field_correction {
        TauFieldCorrection::Fixed => simulate_response(eq, move |_| tau_eff, field, opts),
        TauFieldCorrection::EquilibriumSlope => simulate_response(
            eq,
            move |h: f64| tau_eff * physics::relaxation_field_factor(xi_per_field * h),
            field,
            opts,
        ),
    }
}
