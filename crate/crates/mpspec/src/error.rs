use thiserror::Error;

/// Crate-wide error type. Variants map one-to-one onto the failure modes of
/// the workbench operations so callers (and the CLI's JSON error output) can
/// dispatch on `kind()`.
#[derive(Debug, Error)]
pub enum Error {
    /// Néel exponent K·V/(k_B·T) exceeds the representable range; the Néel
    /// channel is effectively blocked and callers must treat τ_N as infinite.
    #[error("Neel exponent {sigma:.3} exceeds {limit}; treat the Neel time as infinite")]
    OverflowExponent { sigma: f64, limit: f64 },

    /// Tone frequencies (or the sample rate) share no common base frequency
    /// of at least 1 Hz, so no leakage-free analysis record exists.
    #[error("incommensurate tones: {reason}")]
    IncommensurateTones { reason: String },

    /// The retained records still differ after warm-up; the simulation has
    /// not reached a periodic steady state.
    #[error("steady state not periodic: residual {residual:.3e} exceeds tolerance {tolerance:.3e}; increase warmup_records")]
    NonPeriodicSteadyState { residual: f64, tolerance: f64 },

    /// Spectrum input is not an integer number of base periods.
    #[error("bad record length: {len} samples is not a multiple of the base period ({base_period_samples} samples)")]
    BadRecordLength {
        len: usize,
        base_period_samples: usize,
    },

    /// Requested harmonic frequency does not fall on an exact spectrum bin.
    #[error("target frequency {frequency_hz} Hz is not an exact bin (bin width {bin_width_hz} Hz)")]
    OffBinTarget {
        frequency_hz: f64,
        bin_width_hz: f64,
    },

    /// Percent-drop reference (unbound amplitude) is zero.
    #[error("zero reference amplitude: percent drop is undefined")]
    ZeroReference,

    /// Field and voltage series disagree in length, rate, or base period.
    #[error("period mismatch: {reason}")]
    PeriodMismatch { reason: String },

    /// Reconstructed magnetization is identically zero; no loop to normalize.
    #[error("degenerate loop: reconstructed magnetization is identically zero")]
    DegenerateLoop,

    /// Loop magnetization never crosses zero; drive too weak for coercivity.
    #[error("no zero crossing: magnetization never changes sign over the loop")]
    NoZeroCrossing,

    /// Per-mole normalization with a zero molar amount.
    #[error("zero molar amount: per-mole amplitude is undefined")]
    ZeroMoles,

    /// Resonant frequency requested for a drive without a series capacitor.
    #[error("no resonance: drive has no series resonant capacitor")]
    NoResonance,

    /// Unknown sweep protocol name.
    #[error("unknown protocol {name:?} (expected SF-FREQ, DF-FREQ, SF-AMP, or DF-AMP)")]
    UnknownProtocol { name: String },

    /// Filesystem failure while writing results.
    #[error("io failure on {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A pipeline stage failed inside a sweep; identifies the grid point.
    #[error("sweep {plan:?} failed at grid point {grid_index} ({particle}, {binding}): {source}")]
    SweepFailure {
        plan: String,
        grid_index: usize,
        particle: String,
        binding: String,
        #[source]
        source: Box<Error>,
    },

    /// Unknown particle name for the active catalog.
    #[error("particle {name:?} not found in catalog")]
    UnknownParticle { name: String },

    /// Malformed quantity, config, or catalog input.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable discriminant, used by the CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::OverflowExponent { .. } => "OverflowExponent",
            Error::IncommensurateTones { .. } => "IncommensurateTones",
            Error::NonPeriodicSteadyState { .. } => "NonPeriodicSteadyState",
            Error::BadRecordLength { .. } => "BadRecordLength",
            Error::OffBinTarget { .. } => "OffBinTarget",
            Error::ZeroReference => "ZeroReference",
            Error::PeriodMismatch { .. } => "PeriodMismatch",
            Error::DegenerateLoop => "DegenerateLoop",
            Error::NoZeroCrossing => "NoZeroCrossing",
            Error::ZeroMoles => "ZeroMoles",
            Error::NoResonance => "NoResonance",
            Error::UnknownProtocol { .. } => "UnknownProtocol",
            Error::IoFailure { .. } => "IoFailure",
            Error::SweepFailure { .. } => "SweepFailure",
            Error::UnknownParticle { .. } => "UnknownParticle",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
